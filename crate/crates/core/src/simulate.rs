//! Expected-writes analysis: Monte Carlo simulation and exact expectation by
//! dynamic programming over the reachable state graph.
//!
//! Message model: the first message is uniform over all v messages (writing
//! what the empty memory already stores is recorded as a free write); every
//! later message is uniform over the v-1 messages different from the stored
//! one.  A trial ends at the first write the scheme cannot perform.
//!
//! All randomness flows through ChaCha8 streams keyed by (seed, trial), so
//! serial and parallel runs produce bit-identical results.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multilevel::{LiftedCode, Scheme};
use crate::wom::WomCode;

/// Memoization cap for [`exact_expected_writes`].
pub const STATE_BUDGET: u64 = 4_000_000;

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub q: u8,
    pub trials: u64,
    pub seed: u64,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mean: f64,
    pub std_error: f64,
    pub histogram: BTreeMap<usize, u64>,
    pub trials: u64,
}

fn run_trial(code: &LiftedCode, scheme: Scheme, seed: u64, trial: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let v = code.base().message_count();
    let mut state = code.zero_state();
    let mut current = code.decode(&state).ok();
    let mut writes = 0usize;
    let mut slot = 0usize;
    loop {
        let y = if writes == 0 && slot == 0 {
            rng.gen_range(0..v)
        } else {
            // Uniform over messages different from the stored one.
            match current {
                Some(c) => {
                    let r = rng.gen_range(0..v - 1);
                    if r >= c {
                        r + 1
                    } else {
                        r
                    }
                }
                None => rng.gen_range(0..v),
            }
        };
        match scheme {
            Scheme::Complement => {
                // Write-indexed: every write, including a repeat, consumes a
                // schedule slot.
                match code.complement_encode(slot, &state, y) {
                    Ok(next) => {
                        state = next;
                        current = Some(y);
                        writes += 1;
                        slot += 1;
                    }
                    Err(_) => break,
                }
            }
            Scheme::Strategy(strategy) => {
                if current == Some(y) {
                    // Free store of the already-held message; only possible
                    // on the very first draw.
                    writes += 1;
                    slot += 1;
                    continue;
                }
                match code.strategy_encode(strategy, &state, y) {
                    Ok(next) => {
                        state = next;
                        current = Some(y);
                        writes += 1;
                        slot += 1;
                    }
                    Err(_) => break,
                }
            }
        }
    }
    writes
}

/// Monte Carlo estimate of the expected number of writes.
pub fn monte_carlo(base: Arc<dyn WomCode>, config: &SimConfig) -> Result<SimResult> {
    let code = LiftedCode::new(base, config.q)?;
    let counts: Vec<usize> = if config.parallel {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(&code, config.scheme, config.seed, t))
            .collect()
    } else {
        (0..config.trials)
            .map(|t| run_trial(&code, config.scheme, config.seed, t))
            .collect()
    };
    let n = config.trials as f64;
    let sum: u64 = counts.iter().map(|&c| c as u64).sum();
    let mean = sum as f64 / n;
    let ss: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
    let std_error = if config.trials > 1 { (ss / (n - 1.0) / n).sqrt() } else { 0.0 };
    let mut histogram = BTreeMap::new();
    for c in counts {
        *histogram.entry(c).or_insert(0u64) += 1;
    }
    Ok(SimResult { mean, std_error, histogram, trials: config.trials })
}

/// Exact expected writes under the same message model, by recursion over the
/// absorbing chain of reachable states.  For the complement scheme this is
/// its budget (q-1)t exactly.
pub fn exact_expected_writes(base: Arc<dyn WomCode>, scheme: Scheme, q: u8) -> Result<f64> {
    let code = LiftedCode::new(base, q)?;
    let strategy = match scheme {
        Scheme::Complement => return Ok(code.complement_budget() as f64),
        Scheme::Strategy(s) => s,
    };
    let v = code.base().message_count();
    let zero = code.zero_state();
    let mut memo: HashMap<crate::wom::QCellState, f64> = HashMap::new();

    fn expect(
        code: &LiftedCode,
        strategy: crate::multilevel::Strategy,
        state: &crate::wom::QCellState,
        v: usize,
        memo: &mut HashMap<crate::wom::QCellState, f64>,
    ) -> Result<f64> {
        if let Some(&e) = memo.get(state) {
            return Ok(e);
        }
        if memo.len() as u64 > STATE_BUDGET {
            return Err(Error::StateSpace { states: memo.len() as u64, budget: STATE_BUDGET });
        }
        let current = code.decode(state).ok();
        let mut total = 0.0;
        for y in 0..v {
            if current == Some(y) {
                continue;
            }
            if let Ok(next) = code.strategy_encode(strategy, state, y) {
                total += 1.0 + expect(code, strategy, &next, v, memo)?;
            }
        }
        let e = total / (v - 1) as f64;
        memo.insert(state.clone(), e);
        Ok(e)
    }

    // First write: uniform over all v messages; a repeat of what the empty
    // memory stores counts as a free write.
    let current = code.decode(&zero).ok();
    let mut total = 0.0;
    for y in 0..v {
        if current == Some(y) {
            total += 1.0 + expect(&code, strategy, &zero, v, &mut memo)?;
        } else if let Ok(next) = code.strategy_encode(strategy, &zero, y) {
            total += 1.0 + expect(&code, strategy, &next, v, &mut memo)?;
        }
    }
    Ok(total / v as f64)
}

/// One line of a parameter sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub code: String,
    pub scheme: Scheme,
    pub q: u8,
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Monte Carlo means for every (scheme, q) combination.
pub fn sweep(
    base: Arc<dyn WomCode>,
    schemes: &[Scheme],
    q_values: &[u8],
    trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &q in q_values {
        for &scheme in schemes {
            let config = SimConfig { scheme, q, trials, seed, parallel: true };
            let result = monte_carlo(base.clone(), &config)?;
            rows.push(SweepRow {
                code: base.name().to_string(),
                scheme,
                q,
                trials,
                mean: result.mean,
                std_error: result.std_error,
            });
        }
    }
    Ok(rows)
}
