use dygraph_core::{DynamicGraph, EdgeEvent, Op};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::params::GenParams;

/// Seeds the per-instance generator. All randomness in this crate flows
/// through ChaCha8 streams created here, which is what makes instances
/// reproducible byte-for-byte from their recorded seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// ER-style dynamic graph: each pair (in fixed `u < v` order) gets an edge
/// with probability p, one Add at a uniform time in {0..T-1}, and with
/// probability q one Delete at a uniform time in {t_add+1..T}. Events come
/// out sorted by (time, adds-before-deletes, pair).
pub fn gen_dynamic_graph(params: &GenParams) -> DynamicGraph {
    let mut rng = rng_for(params.seed);
    DynamicGraph::new(gen_events(params, &mut rng))
}

/// Same, drawing from a caller-owned stream (used when a generator needs
/// several graphs per instance without reseeding).
pub fn gen_events(params: &GenParams, rng: &mut ChaCha8Rng) -> Vec<EdgeEvent> {
    let mut events = Vec::new();
    for u in 0..params.n {
        for v in (u + 1)..params.n {
            if !rng.gen_bool(params.p) {
                continue;
            }
            let t = rng.gen_range(0..params.t_span);
            events.push(EdgeEvent::new(u, v, t, Op::Add).unwrap());
            if rng.gen_bool(params.del_prob) {
                let td = rng.gen_range(t + 1..=params.t_span);
                events.push(EdgeEvent::new(u, v, td, Op::Delete).unwrap());
            }
        }
    }
    sort_canonical(&mut events);
    events
}

/// The canonical emission order for generated events.
pub fn sort_canonical(events: &mut [EdgeEvent]) {
    events.sort_by_key(|e| (e.t, e.op, e.pair()));
}
