//! Published parameter settings for each task and motif. Edge probability
//! is 0.3 throughout; deletes appear with the default rate 0.2 wherever the
//! task uses naturally generated graphs.

use crate::params::{GenError, GenParams};

pub const EDGE_PROB: f64 = 0.3;
pub const DEL_PROB: f64 = 0.2;

/// (motif, N, M, T, W) for classification: the instance IS the motif, so N
/// is its node count and M its edge count.
const CLASSIFICATION: [(&str, u64, usize, u64, u64); 9] = [
    ("3-star", 4, 3, 5, 5),
    ("triangle", 3, 3, 5, 5),
    ("4-path", 4, 3, 5, 5),
    ("4-cycle", 4, 4, 5, 5),
    ("4-chordalcycle", 4, 5, 10, 10),
    ("4-tailedtriangle", 4, 4, 5, 5),
    ("4-clique", 4, 6, 10, 10),
    ("bitriangle", 6, 6, 10, 10),
    ("butterfly", 4, 4, 5, 5),
];

/// (motif, N, T, W) for detection.
const DETECTION: [(&str, u64, u64, u64); 9] = [
    ("3-star", 10, 5, 3),
    ("triangle", 10, 5, 4),
    ("4-path", 10, 5, 3),
    ("4-cycle", 15, 10, 6),
    ("4-chordalcycle", 20, 15, 14),
    ("4-tailedtriangle", 15, 10, 7),
    ("4-clique", 35, 30, 27),
    ("bitriangle", 25, 20, 14),
    ("butterfly", 15, 10, 6),
];

/// (motif, N, T, W) for construction; only these five motifs have settings.
const CONSTRUCTION: [(&str, u64, u64, u64); 5] = [
    ("4-cycle", 10, 10, 5),
    ("4-tailedtriangle", 10, 10, 5),
    ("4-chordalcycle", 10, 15, 10),
    ("4-clique", 10, 15, 10),
    ("bitriangle", 10, 15, 10),
];

/// Per-motif windows for the multi-motif tasks (all N=20, T=15).
const LEVEL2_WINDOWS: [(&str, u64); 9] = [
    ("3-star", 3),
    ("triangle", 3),
    ("4-path", 3),
    ("4-cycle", 6),
    ("4-chordalcycle", 14),
    ("4-tailedtriangle", 6),
    ("4-clique", 15),
    ("bitriangle", 15),
    ("butterfly", 6),
];

pub const LEVEL2_N: u64 = 20;
pub const LEVEL2_T: u64 = 15;

pub const LEVEL0_N: u64 = 10;
pub const LEVEL0_T: u64 = 5;

fn missing(task: &'static str, motif: &str) -> GenError {
    GenError::MissingSetting { task, motif: motif.to_owned() }
}

/// Classification params: N nodes, T span, window W; the edge count equals
/// the motif's edge count and no background graph exists, so p and q are 0.
pub fn classification_params(motif: &str, seed: u64) -> Result<GenParams, GenError> {
    CLASSIFICATION
        .iter()
        .find(|row| row.0 == motif)
        .map(|&(_, n, _m, t, w)| GenParams {
            n,
            p: 0.0,
            t_span: t,
            window: Some(w),
            del_prob: 0.0,
            seed,
        })
        .ok_or_else(|| missing("classification", motif))
}

pub fn detection_params(motif: &str, seed: u64) -> Result<GenParams, GenError> {
    DETECTION
        .iter()
        .find(|row| row.0 == motif)
        .map(|&(_, n, t, w)| GenParams {
            n,
            p: EDGE_PROB,
            t_span: t,
            window: Some(w),
            del_prob: DEL_PROB,
            seed,
        })
        .ok_or_else(|| missing("detection", motif))
}

pub fn construction_params(motif: &str, seed: u64) -> Result<GenParams, GenError> {
    CONSTRUCTION
        .iter()
        .find(|row| row.0 == motif)
        .map(|&(_, n, t, w)| GenParams {
            n,
            p: EDGE_PROB,
            t_span: t,
            window: Some(w),
            del_prob: DEL_PROB,
            seed,
        })
        .ok_or_else(|| missing("construction", motif))
}

/// Motifs that have construction settings, in listing order.
pub fn construction_motifs() -> Vec<&'static str> {
    CONSTRUCTION.iter().map(|r| r.0).collect()
}

pub fn level2_window(motif: &str) -> Result<u64, GenError> {
    LEVEL2_WINDOWS
        .iter()
        .find(|row| row.0 == motif)
        .map(|&(_, w)| w)
        .ok_or_else(|| missing("level-2", motif))
}

pub fn level2_params(seed: u64) -> GenParams {
    GenParams {
        n: LEVEL2_N,
        p: EDGE_PROB,
        t_span: LEVEL2_T,
        window: None,
        del_prob: DEL_PROB,
        seed,
    }
}

pub fn level0_params(seed: u64) -> GenParams {
    GenParams {
        n: LEVEL0_N,
        p: EDGE_PROB,
        t_span: LEVEL0_T,
        window: None,
        del_prob: DEL_PROB,
        seed,
    }
}
