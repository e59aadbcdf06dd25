use std::collections::VecDeque;

use super::matching::{min_perfect_matching, MatchingRoute};
use super::{shift_to_kernel, ApNormOracle, Certificate, FreeCoarseConfig, FreeError, Method, NormResult};
use crate::coarse::{Entourage, PointId};
use crate::group::ApElement;

/// Hop distances from `source` in the graph whose edges are the pairs of `level`.
pub(crate) fn hop_distances(level: &Entourage, source: PointId) -> Vec<Option<u32>> {
    let mut dist = vec![None; level.window().len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].expect("queued points are reached");
        for y in level.row(x) {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// The norm for `p = 2`: after the forced shift the support `T` has even
/// size, every element of `Y_{n,ε}` is the odd-degree set of `n` edges of the
/// `ε`-graph, and the fewest edges with odd-degree set `T` is a minimum-weight
/// perfect matching of `T` under hop distance.
pub fn ap_norm_tjoin(cfg: &FreeCoarseConfig, a: &ApElement, r: usize) -> Result<NormResult, FreeError> {
    ap_norm_tjoin_via(cfg, a, r, MatchingRoute::Auto)
}

pub(crate) fn ap_norm_tjoin_via(
    cfg: &FreeCoarseConfig,
    a: &ApElement,
    r: usize,
    route: MatchingRoute,
) -> Result<NormResult, FreeError> {
    if cfg.p.get() != 2 {
        return Err(FreeError::NotBinary(cfg.p.get()));
    }
    cfg.check_element(a)?;
    let (shift, b) = shift_to_kernel(a, cfg.z);
    let support: Vec<PointId> = b.support().collect();
    if support.len() % 2 == 1 {
        return Err(FreeError::OddSupport(support.len()));
    }
    let level = cfg.space().level(r);
    let weight: Vec<Vec<Option<u32>>> = support
        .iter()
        .map(|&s| {
            let dist = hop_distances(level, s);
            support.iter().map(|&t| dist[t]).collect()
        })
        .collect();
    Ok(match min_perfect_matching(&weight, route) {
        Some((total, pairs)) => {
            let pairs = pairs.into_iter().map(|(i, j)| (support[i], support[j])).collect();
            NormResult::exact(total as usize, r, Method::Tjoin)
                .with_certificate(Certificate::Matching { shift, pairs })
        }
        // Some support point cannot be paired inside its component: no grade
        // at this radius contains the element.
        None => NormResult::bounds(1, None, r, Method::Tjoin),
    })
}

/// The exact norm by the cheapest available route: matching for `p = 2`, the
/// enumeration oracle otherwise.
pub fn ap_norm(cfg: &FreeCoarseConfig, a: &ApElement, r: usize) -> Result<NormResult, FreeError> {
    if cfg.p.get() == 2 {
        ap_norm_tjoin(cfg, a, r)
    } else {
        ApNormOracle::new(cfg, r)?.norm(a)
    }
}
