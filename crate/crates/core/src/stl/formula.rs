use std::fmt;
use std::sync::Arc;

use crate::scalar::Real;
use crate::stl::trace::Trace;

/// Closed discrete time window `[lo, hi]`.
///
/// `hi == usize::MAX` is an open-ended window that runs to the end of the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    /// Returns `None` unless `lo <= hi`.
    pub fn new(lo: usize, hi: usize) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    /// Window starting at `lo` and extending to the horizon.
    pub fn from(lo: usize) -> Self {
        Self { lo, hi: usize::MAX }
    }

    pub fn point(k: usize) -> Self {
        Self { lo: k, hi: k }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi == usize::MAX {
            write!(f, "[{},K]", self.lo)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

/// Resolves an optional interval against horizon `K`. `None` is the full horizon.
#[inline]
pub fn resolve(interval: Option<Interval>, horizon: usize) -> (usize, usize) {
    match interval {
        None => (0, horizon),
        Some(i) => (i.lo, i.hi),
    }
}

type PredicateFn<F> = dyn Fn(&Trace<F>, usize) -> F + Send + Sync;

/// Atomic proposition `p(y, k) >= 0` backed by an evaluator callback.
///
/// Two predicates with the same id are assumed to compute the same function.
#[derive(Clone)]
pub struct Predicate<F> {
    id: Arc<str>,
    eval: Arc<PredicateFn<F>>,
}

impl<F: Real> Predicate<F> {
    pub fn new(id: impl Into<Arc<str>>, eval: impl Fn(&Trace<F>, usize) -> F + Send + Sync + 'static) -> Self {
        Self { id: id.into(), eval: Arc::new(eval) }
    }

    /// `y[channel] - threshold >= 0`.
    pub fn channel_at_least(id: impl Into<Arc<str>>, channel: usize, threshold: F) -> Self {
        Self::new(id, move |t, k| t.get(k, channel) - threshold)
    }

    /// `threshold - y[channel] >= 0`.
    pub fn channel_at_most(id: impl Into<Arc<str>>, channel: usize, threshold: F) -> Self {
        Self::new(id, move |t, k| threshold - t.get(k, channel))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Raw predicate value `p(y, k)`.
    #[inline]
    pub fn eval(&self, trace: &Trace<F>, k: usize) -> F {
        (self.eval)(trace, k)
    }
}

impl<F> fmt::Debug for Predicate<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.id)
    }
}

/// STL syntax tree. Temporal intervals default to the full horizon when `None`.
#[derive(Clone, Debug)]
pub enum Formula<F> {
    True,
    Predicate(Predicate<F>),
    Not(Box<Formula<F>>),
    And(Box<Formula<F>>, Box<Formula<F>>),
    Or(Box<Formula<F>>, Box<Formula<F>>),
    Implies(Box<Formula<F>>, Box<Formula<F>>),
    Until(Option<Interval>, Box<Formula<F>>, Box<Formula<F>>),
    Since(Option<Interval>, Box<Formula<F>>, Box<Formula<F>>),
    Eventually(Option<Interval>, Box<Formula<F>>),
    Globally(Option<Interval>, Box<Formula<F>>),
    Once(Option<Interval>, Box<Formula<F>>),
    Historically(Option<Interval>, Box<Formula<F>>),
}

impl<F: Real> Formula<F> {
    pub fn pred(p: Predicate<F>) -> Self {
        Formula::Predicate(p)
    }

    pub fn falsum() -> Self {
        Formula::Not(Box::new(Formula::True))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn until(self, interval: Option<Interval>, rhs: Self) -> Self {
        Formula::Until(interval, Box::new(self), Box::new(rhs))
    }

    pub fn since(self, interval: Option<Interval>, rhs: Self) -> Self {
        Formula::Since(interval, Box::new(self), Box::new(rhs))
    }

    pub fn eventually(interval: Option<Interval>, f: Self) -> Self {
        Formula::Eventually(interval, Box::new(f))
    }

    pub fn globally(interval: Option<Interval>, f: Self) -> Self {
        Formula::Globally(interval, Box::new(f))
    }

    pub fn once(interval: Option<Interval>, f: Self) -> Self {
        Formula::Once(interval, Box::new(f))
    }

    pub fn historically(interval: Option<Interval>, f: Self) -> Self {
        Formula::Historically(interval, Box::new(f))
    }

    /// Left-folded conjunction. Empty input yields `True`.
    pub fn and_all(items: impl IntoIterator<Item = Self>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-folded disjunction. Empty input yields `not(true)`.
    pub fn or_all(items: impl IntoIterator<Item = Self>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::falsum(),
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Rewrites derived operators into `True`, predicates, `Not`, `And`, `Until`
    /// and `Since`. Double negations produced by the rewrite are cancelled.
    pub fn normalize(&self) -> Self {
        fn neg<F: Real>(f: Formula<F>) -> Formula<F> {
            match f {
                Formula::Not(inner) => *inner,
                other => Formula::Not(Box::new(other)),
            }
        }
        match self {
            Formula::True => Formula::True,
            Formula::Predicate(p) => Formula::Predicate(p.clone()),
            Formula::Not(a) => Formula::Not(Box::new(a.normalize())),
            Formula::And(a, b) => a.normalize().and(b.normalize()),
            Formula::Or(a, b) => neg(neg(a.normalize()).and(neg(b.normalize()))),
            Formula::Implies(a, b) => {
                // a => b  :=  not a  or  b  :=  not(a and not b)
                neg(a.normalize().and(neg(b.normalize())))
            }
            Formula::Until(i, a, b) => a.normalize().until(*i, b.normalize()),
            Formula::Since(i, a, b) => a.normalize().since(*i, b.normalize()),
            Formula::Eventually(i, a) => Formula::True.until(*i, a.normalize()),
            Formula::Once(i, a) => Formula::True.since(*i, a.normalize()),
            Formula::Globally(i, a) => neg(Formula::True.until(*i, neg(a.normalize()))),
            Formula::Historically(i, a) => neg(Formula::True.since(*i, neg(a.normalize()))),
        }
    }

    /// True when only core-grammar nodes occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::True | Formula::Predicate(_) => true,
            Formula::Not(a) => a.is_core(),
            Formula::And(a, b) | Formula::Until(_, a, b) | Formula::Since(_, a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    /// True when the tree uses only core nodes and every negation sits directly
    /// on a predicate.
    pub fn is_negation_normal(&self) -> bool {
        match self {
            Formula::True | Formula::Predicate(_) => true,
            Formula::Not(a) => matches!(**a, Formula::Predicate(_)),
            Formula::And(a, b) | Formula::Until(_, a, b) | Formula::Since(_, a, b) => {
                a.is_negation_normal() && b.is_negation_normal()
            }
            _ => false,
        }
    }

    /// Every distinct predicate, in first-occurrence order.
    pub fn predicates(&self) -> Vec<Predicate<F>> {
        let mut out: Vec<Predicate<F>> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Predicate(p) = f {
                if !out.iter().any(|q| q.id() == p.id()) {
                    out.push(p.clone());
                }
            }
        });
        out
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    fn visit(&self, f: &mut impl FnMut(&Formula<F>)) {
        f(self);
        match self {
            Formula::True | Formula::Predicate(_) => {}
            Formula::Not(a)
            | Formula::Eventually(_, a)
            | Formula::Globally(_, a)
            | Formula::Once(_, a)
            | Formula::Historically(_, a) => a.visit(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(_, a, b)
            | Formula::Since(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Structural equality, comparing predicates by id.
    pub fn same_shape(&self, other: &Self) -> bool {
        use Formula::*;
        match (self, other) {
            (True, True) => true,
            (Predicate(a), Predicate(b)) => a.id() == b.id(),
            (Not(a), Not(b)) => a.same_shape(b),
            (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Implies(a, b), Implies(c, d)) => {
                a.same_shape(c) && b.same_shape(d)
            }
            (Until(i, a, b), Until(j, c, d)) | (Since(i, a, b), Since(j, c, d)) => {
                i == j && a.same_shape(c) && b.same_shape(d)
            }
            (Eventually(i, a), Eventually(j, b))
            | (Globally(i, a), Globally(j, b))
            | (Once(i, a), Once(j, b))
            | (Historically(i, a), Historically(j, b)) => i == j && a.same_shape(b),
            _ => false,
        }
    }
}

fn write_interval(f: &mut fmt::Formatter<'_>, i: &Option<Interval>) -> fmt::Result {
    match i {
        Some(i) => write!(f, "{i}"),
        None => Ok(()),
    }
}

impl<F> fmt::Display for Formula<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::Predicate(p) => write!(f, "{}", p.id),
            Formula::Not(a) => write!(f, "not({a})"),
            Formula::And(a, b) => write!(f, "and({a}, {b})"),
            Formula::Or(a, b) => write!(f, "or({a}, {b})"),
            Formula::Implies(a, b) => write!(f, "implies({a}, {b})"),
            Formula::Until(i, a, b) => {
                write!(f, "U")?;
                write_interval(f, i)?;
                write!(f, "({a}, {b})")
            }
            Formula::Since(i, a, b) => {
                write!(f, "S")?;
                write_interval(f, i)?;
                write!(f, "({a}, {b})")
            }
            Formula::Eventually(i, a) => {
                write!(f, "F")?;
                write_interval(f, i)?;
                write!(f, "({a})")
            }
            Formula::Globally(i, a) => {
                write!(f, "G")?;
                write_interval(f, i)?;
                write!(f, "({a})")
            }
            Formula::Once(i, a) => {
                write!(f, "O")?;
                write_interval(f, i)?;
                write!(f, "({a})")
            }
            Formula::Historically(i, a) => {
                write!(f, "H")?;
                write_interval(f, i)?;
                write!(f, "({a})")
            }
        }
    }
}
