//! Recursive robustness evaluation with per-node memoization.

use crate::error::Result;
use crate::robustness::ext::ExtReal;
use crate::robustness::measure::MeasureConfig;
use crate::robustness::ops::{amax, amin, OperatorFamily};
use crate::robustness::predicate::predicate_robustness;
use crate::scalar::Real;
use crate::stl::{future_window, past_window, resolve, Formula, Interval, Predicate, Trace};

/// Whether raw predicate values are cached per `(predicate, k)` during one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PredicateCache {
    /// Every inspection of `p(y, k)` calls the predicate.
    Off,
    /// Each `(predicate, k)` pair is evaluated at most once.
    #[default]
    On,
}

/// Counters collected during an evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Number of calls into predicate callbacks.
    pub predicate_calls: usize,
}

#[derive(Debug, Clone, Copy)]
enum Node {
    True,
    Pred(usize),
    Not(usize),
    And(usize, usize),
    Until(Option<Interval>, usize, usize),
    Since(Option<Interval>, usize, usize),
}

/// A formula normalized and flattened into an arena, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledFormula<F> {
    nodes: Vec<Node>,
    predicates: Vec<Predicate<F>>,
    root: usize,
}

impl<F: Real> CompiledFormula<F> {
    pub fn new(formula: &Formula<F>) -> Self {
        let normalized = if formula.is_core() { formula.clone() } else { formula.normalize() };
        let mut c = Self { nodes: Vec::new(), predicates: Vec::new(), root: 0 };
        c.root = c.push(&normalized);
        c
    }

    fn push(&mut self, f: &Formula<F>) -> usize {
        let node = match f {
            Formula::True => Node::True,
            Formula::Predicate(p) => {
                let idx = match self.predicates.iter().position(|q| q.id() == p.id()) {
                    Some(i) => i,
                    None => {
                        self.predicates.push(p.clone());
                        self.predicates.len() - 1
                    }
                };
                Node::Pred(idx)
            }
            Formula::Not(a) => Node::Not(self.push(a)),
            Formula::And(a, b) => {
                let (a, b) = (self.push(a), self.push(b));
                Node::And(a, b)
            }
            Formula::Until(i, a, b) => {
                let (a, b) = (self.push(a), self.push(b));
                Node::Until(*i, a, b)
            }
            Formula::Since(i, a, b) => {
                let (a, b) = (self.push(a), self.push(b));
                Node::Since(*i, a, b)
            }
            _ => unreachable!("formula is normalized before compilation"),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn predicates(&self) -> &[Predicate<F>] {
        &self.predicates
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Robustness at time `k`.
    pub fn robustness(&self, config: &MeasureConfig<F>, trace: &Trace<F>, k: usize) -> Result<ExtReal<F>> {
        trace.check_time(k)?;
        let mut ev = Evaluator::new(self, config, trace, PredicateCache::On);
        Ok(ev.eval(self.root, k))
    }

    /// Robustness at every time step, sharing one memo table.
    pub fn robustness_all_times(&self, config: &MeasureConfig<F>, trace: &Trace<F>) -> Vec<ExtReal<F>> {
        let mut ev = Evaluator::new(self, config, trace, PredicateCache::On);
        (0..=trace.horizon()).map(|k| ev.eval(self.root, k)).collect()
    }

    /// Robustness at `k` together with call counters.
    pub fn robustness_with_stats(
        &self,
        config: &MeasureConfig<F>,
        trace: &Trace<F>,
        k: usize,
        cache: PredicateCache,
    ) -> Result<(ExtReal<F>, EvalStats)> {
        trace.check_time(k)?;
        let mut ev = Evaluator::new(self, config, trace, cache);
        let r = ev.eval(self.root, k);
        Ok((r, EvalStats { predicate_calls: ev.calls }))
    }
}

/// Robustness `eta(y, k)` of `formula` under `config`.
pub fn robustness<F: Real>(config: &MeasureConfig<F>, formula: &Formula<F>, trace: &Trace<F>, k: usize) -> Result<ExtReal<F>> {
    CompiledFormula::new(formula).robustness(config, trace, k)
}

/// Robustness at every `k` in `0..=K`.
pub fn robustness_all_times<F: Real>(config: &MeasureConfig<F>, formula: &Formula<F>, trace: &Trace<F>) -> Vec<ExtReal<F>> {
    CompiledFormula::new(formula).robustness_all_times(config, trace)
}

struct Evaluator<'a, F> {
    compiled: &'a CompiledFormula<F>,
    config: &'a MeasureConfig<F>,
    trace: &'a Trace<F>,
    horizon: usize,
    memo: Vec<Option<ExtReal<F>>>,
    values: Vec<Option<F>>,
    cache: PredicateCache,
    calls: usize,
}

impl<'a, F: Real> Evaluator<'a, F> {
    fn new(compiled: &'a CompiledFormula<F>, config: &'a MeasureConfig<F>, trace: &'a Trace<F>, cache: PredicateCache) -> Self {
        let width = trace.len();
        Self {
            compiled,
            config,
            trace,
            horizon: trace.horizon(),
            memo: vec![None; compiled.nodes.len() * width],
            values: vec![None; compiled.predicates.len() * width],
            cache,
            calls: 0,
        }
    }

    fn eval(&mut self, node: usize, k: usize) -> ExtReal<F> {
        let slot = node * (self.horizon + 1) + k;
        if let Some(v) = self.memo[slot] {
            return v;
        }
        let v = match self.compiled.nodes[node] {
            Node::True => ExtReal::PosInf,
            Node::Pred(i) => self.predicate(i, k),
            Node::Not(a) => -self.eval(a, k),
            Node::And(a, b) => {
                let (x, y) = (self.eval(a, k), self.eval(b, k));
                self.min2(x, y)
            }
            Node::Until(i, a, b) => self.until(i, a, b, k),
            Node::Since(i, a, b) => self.since(i, a, b, k),
        };
        self.memo[slot] = Some(v);
        v
    }

    fn predicate(&mut self, i: usize, k: usize) -> ExtReal<F> {
        let pred = &self.compiled.predicates[i];
        let trace = self.trace;
        let width = self.horizon + 1;
        let cache = self.cache;
        let calls = &mut self.calls;
        let values = &mut self.values;
        let mut read = |kp: usize| -> F {
            let fetch = |calls: &mut usize| {
                *calls += 1;
                let v = pred.eval(trace, kp);
                if v.is_nan() {
                    F::neg_infinity()
                } else {
                    v
                }
            };
            match cache {
                PredicateCache::Off => fetch(calls),
                PredicateCache::On => *values[i * width + kp].get_or_insert_with(|| fetch(calls)),
            }
        };
        predicate_robustness(self.config.predicate, &mut read, k, self.horizon)
    }

    fn min2(&self, x: ExtReal<F>, y: ExtReal<F>) -> ExtReal<F> {
        match self.config.min_op {
            OperatorFamily::Std => x.min(y),
            fam => amin(fam, &[x, y], &self.config.nu).expect("two operands"),
        }
    }

    fn min_list(&self, xs: &[ExtReal<F>]) -> ExtReal<F> {
        if xs.is_empty() {
            return ExtReal::PosInf;
        }
        amin(self.config.min_op, xs, &self.config.nu).expect("nonempty")
    }

    fn max_list(&self, xs: &[ExtReal<F>]) -> ExtReal<F> {
        if xs.is_empty() {
            return ExtReal::NegInf;
        }
        amax(self.config.max_op, xs, &self.config.nu).expect("nonempty")
    }

    fn until(&mut self, interval: Option<Interval>, a: usize, b: usize, k: usize) -> ExtReal<F> {
        let (lo, hi) = resolve(interval, self.horizon);
        let Some((s, e)) = future_window(k, lo, hi, self.horizon) else {
            return ExtReal::NegInf;
        };
        if self.config.is_standard() {
            let mut best = ExtReal::NegInf;
            let mut run = ExtReal::PosInf;
            for kp in k..=e {
                if kp >= s {
                    let term = self.eval(b, kp).min(run);
                    best = best.max(term);
                }
                if kp == e {
                    break;
                }
                run = run.min(self.eval(a, kp));
                // later terms are bounded by `run`
                if run.total_cmp(&best).is_le() {
                    break;
                }
            }
            return best;
        }
        let lhs: Vec<ExtReal<F>> = (k..e).map(|kp| self.eval(a, kp)).collect();
        let mut terms = Vec::with_capacity(e - s + 1);
        for kp in s..=e {
            let inner = self.min_list(&lhs[..kp - k]);
            let rhs = self.eval(b, kp);
            terms.push(self.min2(rhs, inner));
        }
        self.max_list(&terms)
    }

    fn since(&mut self, interval: Option<Interval>, a: usize, b: usize, k: usize) -> ExtReal<F> {
        let (lo, hi) = resolve(interval, self.horizon);
        let Some((s, e)) = past_window(k, lo, hi) else {
            return ExtReal::NegInf;
        };
        if self.config.is_standard() {
            let mut best = ExtReal::NegInf;
            let mut run = ExtReal::PosInf;
            for kp in (s..=k).rev() {
                if kp <= e {
                    let term = self.eval(b, kp).min(run);
                    best = best.max(term);
                }
                if kp == s {
                    break;
                }
                run = run.min(self.eval(a, kp));
                if run.total_cmp(&best).is_le() {
                    break;
                }
            }
            return best;
        }
        // lhs[j] = eta_a(s + 1 + j), the inner range for k' is (k', k]
        let lhs: Vec<ExtReal<F>> = (s + 1..=k).map(|kp| self.eval(a, kp)).collect();
        let mut terms = Vec::with_capacity(e - s + 1);
        for kp in s..=e {
            let inner = self.min_list(&lhs[kp - s..]);
            let rhs = self.eval(b, kp);
            terms.push(self.min2(rhs, inner));
        }
        self.max_list(&terms)
    }
}
