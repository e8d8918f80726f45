//! Rips complexes of finite metric spaces and the induced map of a cover
//! on 1-skeleta.

use std::collections::HashSet;
use std::io::Write;
use std::sync::Arc;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::covers::{max_cover_radius, verify_cover_radius, CoverWitness, MetricCoverMap, Truncation};
use crate::metric::{Dist, FiniteMetricSpace, MetricError};

#[derive(Debug, Error)]
pub enum RipsError {
    #[error("more than {0} simplices")]
    SimplexCapExceeded(usize),
    #[error("dimension cap must be at least 1")]
    DimensionCap,
    #[error("scale must be a positive integer on graph metrics, got {0}")]
    Scale(Dist),
    #[error("radius {radius} is below three times the scale {scale}")]
    RadiusTooSmall { radius: Dist, scale: u32 },
    #[error("skeleton transfer needs graph metrics on both sides")]
    NotGraph,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// All subsets of at most `dimension_cap + 1` points with diameter `<= scale`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RipsComplex {
    pub points: usize,
    pub scale: Dist,
    pub dimension_cap: usize,
    /// `simplices[k]` lists the `k`-simplices as sorted vertex tuples, in
    /// lexicographic order.
    pub simplices: Vec<Vec<Vec<u32>>>,
}

impl RipsComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices
            .get(1)
            .map(|e| e.iter().map(|s| (s[0] as usize, s[1] as usize)).collect())
            .unwrap_or_default()
    }

    /// Shortest-path metric on the 1-skeleton with unit edges.
    pub fn skeleton(&self) -> Result<FiniteMetricSpace, MetricError> {
        FiniteMetricSpace::from_edges(self.points, &self.edges())
    }

    /// Writes one `dimension,v0,v1,...` row per simplex.
    pub fn write_simplices_csv<W: Write>(&self, out: W) -> Result<(), RipsError> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        for (k, list) in self.simplices.iter().enumerate() {
            for s in list {
                let mut row = vec![k.to_string()];
                row.extend(s.iter().map(u32::to_string));
                w.write_record(&row)?;
            }
        }
        w.flush().map_err(|e| RipsError::Io(e.to_string()))?;
        Ok(())
    }
}

/// Enumerates the Rips complex as the clique complex of the scale graph.
pub fn build_rips(space: &FiniteMetricSpace, scale: Dist, dimension_cap: usize, simplex_cap: usize) -> Result<RipsComplex, RipsError> {
    if dimension_cap < 1 {
        return Err(RipsError::DimensionCap);
    }
    let n = space.len();
    let up: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|x| (x + 1..n).filter(|&y| space.dist(x, y) <= scale).map(|y| y as u32).collect())
        .collect();
    let per_vertex: Vec<Vec<Vec<u32>>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut out = Vec::new();
            let mut stack = vec![x as u32];
            extend_cliques(&up, &mut stack, &up[x], dimension_cap + 1, &mut out);
            out
        })
        .collect();
    let mut simplices: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dimension_cap + 1];
    let mut total = 0usize;
    for list in per_vertex {
        for s in list {
            total += 1;
            if total > simplex_cap {
                return Err(RipsError::SimplexCapExceeded(simplex_cap));
            }
            simplices[s.len() - 1].push(s);
        }
    }
    for list in &mut simplices {
        list.sort_unstable();
    }
    while simplices.len() > 1 && simplices.last().is_some_and(Vec::is_empty) {
        simplices.pop();
    }
    Ok(RipsComplex {
        points: n,
        scale,
        dimension_cap,
        simplices,
    })
}

fn extend_cliques(up: &[Vec<u32>], stack: &mut Vec<u32>, candidates: &[u32], max_size: usize, out: &mut Vec<Vec<u32>>) {
    out.push(stack.clone());
    if stack.len() == max_size {
        return;
    }
    for (i, &y) in candidates.iter().enumerate() {
        let rest: Vec<u32> = candidates[i + 1..]
            .iter()
            .copied()
            .filter(|z| up[y as usize].binary_search(z).is_ok())
            .collect();
        stack.push(y);
        extend_cliques(up, stack, &rest, max_size, out);
        stack.pop();
    }
}

/// Outcome of transferring a cover to Rips 1-skeleta.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonTransfer {
    pub scale: u32,
    pub cover_radius: Dist,
    /// `floor(R / d) - 1`.
    pub predicted_radius: i64,
    /// Base simplices with no simplex of the total mapping onto them.
    pub unlifted_simplices: Vec<Vec<u32>>,
    pub base_simplex_counts: Vec<usize>,
    pub centers_checked: usize,
    pub witness: Option<CoverWitness>,
}

impl SkeletonTransfer {
    pub fn passed(&self) -> bool {
        self.unlifted_simplices.is_empty() && self.witness.is_none()
    }
}

/// Rips complexes of both sides of a cover at integer scale `d`, the
/// induced vertex map on 1-skeleta, and its verification at the
/// predicted radius `floor(R/d) - 1`. Requires `R >= 3d` where `R` is the
/// certified radius of `p` (computed when absent).
pub fn induced_cover_on_skeleton(
    p: &MetricCoverMap,
    d: u32,
    dimension_cap: usize,
    simplex_cap: usize,
) -> Result<(MetricCoverMap, SkeletonTransfer), RipsError> {
    if !p.total().is_graph() || !p.base().is_graph() {
        return Err(RipsError::NotGraph);
    }
    if d == 0 {
        return Err(RipsError::Scale(Dist::default()));
    }
    let radius = p.certified_radius().unwrap_or_else(|| max_cover_radius(p));
    if radius < Rational64::from_integer(3 * d as i64) {
        return Err(RipsError::RadiusTooSmall { radius, scale: d });
    }
    let scale = Rational64::from_integer(d as i64);
    let total_rips = build_rips(p.total(), scale, dimension_cap, simplex_cap)?;
    let base_rips = build_rips(p.base(), scale, dimension_cap, simplex_cap)?;

    // brute force: the images of all total simplices must include every
    // base simplex
    let images: HashSet<Vec<u32>> = total_rips
        .simplices
        .iter()
        .flatten()
        .filter_map(|s| {
            let mut img: Vec<u32> = s.iter().map(|&v| p.map()[v as usize] as u32).collect();
            img.sort_unstable();
            img.dedup();
            (img.len() == s.len()).then_some(img)
        })
        .collect();
    let unlifted: Vec<Vec<u32>> = base_rips
        .simplices
        .iter()
        .flatten()
        .filter(|s| !images.contains(*s))
        .cloned()
        .collect();

    let truncation = p.truncation().map(|t| Truncation {
        depth: t.depth.clone(),
        limit: t.limit.saturating_sub(d),
        scale: d,
    });
    let skeleton_cover = p.respaced(Arc::new(total_rips.skeleton()?), Arc::new(base_rips.skeleton()?), truncation);
    let predicted = (radius / scale).floor().to_integer() - 1;
    let r = Rational64::from_integer(predicted.max(0));
    let witness = verify_cover_radius(&skeleton_cover, r).err();
    let transfer = SkeletonTransfer {
        scale: d,
        cover_radius: radius,
        predicted_radius: predicted,
        unlifted_simplices: unlifted,
        base_simplex_counts: base_rips.counts(),
        centers_checked: skeleton_cover.centers(r).len(),
        witness,
    };
    Ok((skeleton_cover, transfer))
}
