use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lexscalar::CostFunction;
use crate::scalar::Real;
use crate::solver::Candidate;
use crate::systems::{rollout, System};

/// Largest number of rollouts [`brute_force_optimum`] will enumerate.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// Exhaustive minimum of the cost over input plans drawn from `grid`.
///
/// `grid` lists candidate input vectors (each of length `n_u`). Inputs `u_0..u_{K-1}`
/// range over the grid; `u_K` only enters the output map and repeats `u_{K-1}`.
/// Ties keep the plan with the smallest enumeration index.
pub fn brute_force_optimum<F, S, C>(system: &S, cost: &C, x0: &[F], grid: &[Vec<F>], horizon: usize) -> Result<Candidate<F>>
where
    F: Real,
    S: System<F> + ?Sized,
    C: CostFunction<F> + ?Sized,
{
    if horizon == 0 || grid.is_empty() {
        return Err(Error::Config("brute force needs K >= 1 and a nonempty grid".into()));
    }
    let n_u = system.n_u();
    if grid.iter().any(|g| g.len() != n_u) {
        return Err(Error::Config(format!("grid points must have {n_u} entries")));
    }
    let estimate = (grid.len() as u128).checked_pow(horizon as u32).unwrap_or(u128::MAX);
    if estimate > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge { estimate, limit: ENUMERATION_LIMIT });
    }
    let g = grid.len();
    let plan = |mut idx: usize| {
        let mut u = Vec::with_capacity((horizon + 1) * n_u);
        for _ in 0..horizon {
            u.extend_from_slice(&grid[idx % g]);
            idx /= g;
        }
        let last = u[(horizon - 1) * n_u..].to_vec();
        u.extend_from_slice(&last);
        u
    };
    (0..estimate as usize)
        .into_par_iter()
        .filter_map(|i| {
            let u = plan(i);
            let trace = rollout(system, x0, &u).ok()?;
            let c = cost.cost(&trace).ok()?;
            Some((c, i, u, trace))
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(cost, _, inputs, trace)| Candidate { inputs, trace, cost })
        .ok_or(Error::NoValidSample)
}

/// `n` equally spaced points from `lo` to `hi` (inclusive).
pub fn linspace<F: Real>(lo: F, hi: F, n: usize) -> Vec<F> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * F::from_usize_lossy(i) / F::from_usize_lossy(n - 1)).collect(),
    }
}
