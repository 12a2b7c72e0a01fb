//! Property-based invariants: monotone writes, valid states, and agreement
//! of the fast paths with brute-force oracles on random inputs.

use std::sync::Arc;

use proptest::prelude::*;

use womgeo::concat::{inject_errors, random_error_pattern, WomRepCode};
use womgeo::geo_wom::{EgCode, Pg22Code};
use womgeo::geometry::{affine_span, enumerate_flats};
use womgeo::multilevel::{LiftedCode, Strategy};
use womgeo::wom::{encode_sequence, rivest_shamir, QCellState, WomCode};
use womgeo::BitVector;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn bitvector_order_matches_strings(a in 0u64..256, b in 0u64..256) {
        let va = BitVector::from_mask(8, a);
        let vb = BitVector::from_mask(8, b);
        prop_assert_eq!(va.cmp(&vb), va.to_string().cmp(&vb.to_string()));
    }

    #[test]
    fn affine_span_is_smallest_containing_flat(
        m in 2usize..=4,
        points in prop::collection::vec(0u32..16, 1..5),
    ) {
        let points: Vec<u32> = points.into_iter().map(|p| p % (1 << m)).collect();
        let span = affine_span(m, &points).unwrap();
        for &p in &points {
            prop_assert!(span.contains(p));
        }
        // No enumerated flat of smaller dimension contains all the points.
        for mu in 0..span.dim() {
            for flat in enumerate_flats(m, mu).unwrap() {
                prop_assert!(!points.iter().all(|&p| flat.contains(p)));
            }
        }
    }

    #[test]
    fn flats_are_closed_under_affine_combination(
        m in 2usize..=5,
        mu in 1usize..=3,
        idx: prop::sample::Index,
    ) {
        let mu = mu.min(m);
        let flats = enumerate_flats(m, mu).unwrap();
        let flat = &flats[idx.index(flats.len())];
        for &a in flat.points() {
            for &b in flat.points() {
                for &c in flat.points() {
                    prop_assert!(flat.contains(a ^ b ^ c));
                }
            }
        }
    }

    #[test]
    fn rs_strategy_traces_are_monotone_and_decode(
        q in 2u8..=6,
        seq in prop::collection::vec(0usize..4, 1..12),
    ) {
        let code = LiftedCode::new(Arc::new(rivest_shamir()), q).unwrap();
        for strategy in [Strategy::A, Strategy::B] {
            let mut state = code.zero_state();
            for &msg in &seq {
                match code.strategy_encode(strategy, &state, msg) {
                    Ok(next) => {
                        prop_assert!(state.le(&next));
                        prop_assert!(next.max_level() < q);
                        prop_assert_eq!(code.decode(&next).unwrap(), msg);
                        state = next;
                    }
                    Err(_) => break,
                }
            }
        }
    }

    #[test]
    fn rs_strategies_match_full_lift_enumeration(
        q in 2u8..=4,
        seq in prop::collection::vec(0usize..4, 1..8),
    ) {
        // Oracle: enumerate U(y) + V, every representation plus every
        // all-even offset below q, and pick the best by the strategy key.
        let base = rivest_shamir();
        let code = LiftedCode::new(Arc::new(rivest_shamir()), q).unwrap();
        for strategy in [Strategy::A, Strategy::B] {
            let mut state = code.zero_state();
            for &msg in &seq {
                if code.decode(&state).ok() == Some(msg) {
                    continue;
                }
                let oracle = oracle_best(&base, q, strategy, &state, msg);
                match code.strategy_encode(strategy, &state, msg) {
                    Ok(next) => {
                        prop_assert_eq!(Some(&next), oracle.as_ref());
                        state = next;
                    }
                    Err(_) => {
                        prop_assert!(oracle.is_none());
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn pg_strategy_traces_stay_valid(
        q in 2u8..=3,
        seq in prop::collection::vec(0usize..7, 1..10),
    ) {
        let code = LiftedCode::new(Arc::new(Pg22Code::new()), q).unwrap();
        for strategy in [Strategy::A, Strategy::B] {
            let mut state = code.zero_state();
            for &msg in &seq {
                match code.strategy_encode(strategy, &state, msg) {
                    Ok(next) => {
                        prop_assert!(state.le(&next));
                        prop_assert_eq!(code.decode(&next).unwrap(), msg);
                        state = next;
                    }
                    Err(_) => break,
                }
            }
        }
    }

    #[test]
    fn eg_traces_stay_distance_one(
        m in 4usize..=5,
        seq in prop::collection::vec(0usize..16, 1..9),
    ) {
        let eg = EgCode::new(m).unwrap();
        let seq: Vec<usize> = seq.into_iter().map(|s| s % eg.message_count()).collect();
        let mut state = BitVector::zero(eg.cells());
        for (j, &msg) in seq.iter().enumerate() {
            match eg.encode(j, &state, msg) {
                Ok(next) => {
                    prop_assert!(state.subset_of(&next));
                    let flip = eg.decode(&next).unwrap();
                    prop_assert_eq!(flip, msg);
                    let cw = next.xor(&BitVector::from_mask(eg.cells(), 1 << flip));
                    prop_assert!(eg.base_code().contains(&cw));
                    state = next;
                }
                Err(_) => break,
            }
        }
    }

    #[test]
    fn wom_rep_corrects_random_single_errors(
        q in 2u8..=5,
        seq in prop::collection::vec(0usize..4, 1..6),
        seed in 0u64..1_000,
    ) {
        let code = WomRepCode::new(Arc::new(rivest_shamir()), 3, q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = code.zero_state();
        for (j, &msg) in seq.iter().enumerate() {
            let Ok(next) = code.encode(j, &state, msg) else { break };
            let pattern = random_error_pattern(&mut rng, &next, 1);
            let bad = inject_errors(&next, &pattern).unwrap();
            let (got, fixed) = code.read_and_correct(j + 1, &bad).unwrap();
            prop_assert_eq!(got, msg);
            state = fixed;
        }
    }

    #[test]
    fn binary_encode_sequence_is_monotone(
        seq in prop::collection::vec(0usize..7, 1..5),
    ) {
        let pg = Pg22Code::new();
        if let Ok(trace) = encode_sequence(&pg, &seq) {
            let states = trace.states();
            for w in states.windows(2) {
                prop_assert!(w[0].subset_of(&w[1]));
            }
        }
    }
}

/// Brute-force optimum over U(y) + V for the strategy key.
fn oracle_best(
    base: &dyn WomCode,
    q: u8,
    strategy: Strategy,
    state: &QCellState,
    msg: usize,
) -> Option<QCellState> {
    let n = base.cells();
    let mut best: Option<QCellState> = None;
    for rep in base.representations(msg) {
        // All even offsets keeping every level below q.
        let half = (q as usize).div_ceil(2);
        let count = half.pow(n as u32);
        for mut idx in 0..count {
            let mut levels = Vec::with_capacity(n);
            let mut ok = true;
            for i in 0..n {
                let offset = 2 * (idx % half) as u8;
                idx /= half;
                let level = offset + u8::from(rep.get(i));
                if level >= q {
                    ok = false;
                    break;
                }
                levels.push(level);
            }
            if !ok {
                continue;
            }
            let cand = QCellState::new(q, levels).unwrap();
            if !state.le(&cand) {
                continue;
            }
            let key = |v: &QCellState| match strategy {
                Strategy::A => (0, state.cells_increased(v)),
                Strategy::B => (v.max_level() as usize, state.cells_increased(v)),
            };
            let better = match &best {
                None => true,
                Some(b) => key(&cand) < key(b) || (key(&cand) == key(b) && cand < *b),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best
}
