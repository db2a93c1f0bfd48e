//! Synthetic graphs with planted topological imbalance.
//!
//! Nodes are split into contiguous communities. Each community `c` has a
//! minority concentration `ρ_c`; every node draws a latent "minority
//! affinity" bit with probability `ρ_c`. Edges follow a two-level block model
//! and an edge is minority with probability `min(1, s · (a_u + a_v) / 2)`,
//! where the scale `s` is solved on the realized edges so the expected
//! minority ratio equals `minority_fraction`. Communities with `ρ ∈ {0, 1}`
//! give homogeneous neighborhoods (low entropy); intermediate `ρ` gives mixed
//! neighborhoods (high entropy).
//!
//! Node features are noisy community indicators plus one noisy affinity
//! channel; edge features are the mean and absolute difference of the
//! endpoint features.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{AttributedGraph, EdgeLabeling};
use crate::error::{Error, Result};
use crate::tensor::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedImbalanceSpec {
    pub n_nodes: usize,
    pub n_communities: usize,
    pub p_intra: f64,
    pub p_inter: f64,
    /// Target global ratio of minority (class 1) edges, in `(0, 0.5]`.
    pub minority_fraction: f64,
    /// Minority concentration per community, each in `[0, 1]`.
    pub mixing_profile: Vec<f64>,
    /// Standard deviation of the Gaussian noise added to node features.
    pub feature_noise: f64,
    /// Magnitude of the affinity channel before noise.
    pub affinity_signal: f64,
    pub seed: u64,
}

impl Default for PlantedImbalanceSpec {
    fn default() -> Self {
        Self {
            n_nodes: 500,
            n_communities: 10,
            p_intra: 0.08,
            p_inter: 0.004,
            minority_fraction: 0.1,
            mixing_profile: vec![0.9, 0.4, 0.3, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0],
            feature_noise: 0.5,
            affinity_signal: 1.0,
            seed: 0,
        }
    }
}

impl PlantedImbalanceSpec {
    /// Profile with `ρ ∈ {0, 1}`: the first `⌈k · minority_fraction⌉`
    /// communities are entirely minority-affine.
    pub fn homogeneous_profile(n_communities: usize, minority_fraction: f64) -> Vec<f64> {
        let minority = ((n_communities as f64 * minority_fraction).round() as usize).clamp(1, n_communities);
        (0..n_communities).map(|c| if c < minority { 1.0 } else { 0.0 }).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must lie in [0, 1], got {p}")))
            }
        };
        prob("p_intra", self.p_intra)?;
        prob("p_inter", self.p_inter)?;
        if !(self.minority_fraction > 0.0 && self.minority_fraction <= 0.5) {
            return Err(Error::Parameter(format!(
                "minority_fraction must lie in (0, 0.5], got {}",
                self.minority_fraction
            )));
        }
        if self.n_communities == 0 || self.n_communities > self.n_nodes {
            return Err(Error::Parameter(format!(
                "need 1..={} communities, got {}",
                self.n_nodes, self.n_communities
            )));
        }
        if self.mixing_profile.len() != self.n_communities {
            return Err(Error::Parameter(format!(
                "mixing profile has {} entries for {} communities",
                self.mixing_profile.len(),
                self.n_communities
            )));
        }
        for &r in &self.mixing_profile {
            prob("mixing concentration", r)?;
        }
        if !(self.feature_noise >= 0.0 && self.feature_noise.is_finite()) {
            return Err(Error::Parameter("feature_noise must be finite and >= 0".into()));
        }
        if !self.affinity_signal.is_finite() {
            return Err(Error::Parameter("affinity_signal must be finite".into()));
        }
        let expected = self.expected_edges();
        if expected <= 0.0 {
            return Err(Error::Parameter("parameters imply zero expected edges".into()));
        }
        Ok(())
    }

    pub fn community_of(&self, node: usize) -> usize {
        node * self.n_communities / self.n_nodes
    }

    fn expected_edges(&self) -> f64 {
        let mut sizes = vec![0usize; self.n_communities];
        for i in 0..self.n_nodes {
            sizes[self.community_of(i)] += 1;
        }
        let intra: f64 = sizes.iter().map(|&s| (s * s.saturating_sub(1) / 2) as f64).sum();
        let total = (self.n_nodes * self.n_nodes.saturating_sub(1) / 2) as f64;
        intra * self.p_intra + (total - intra) * self.p_inter
    }
}

/// Solves for `s` with `mean_e min(1, s · t_e) = target`, `t_e ∈ {0, ½, 1}`.
fn solve_scale(touch: &[f64], target: f64) -> Result<f64> {
    let m = touch.len() as f64;
    let ratio = |s: f64| touch.iter().map(|&t| (s * t).min(1.0)).sum::<f64>() / m;
    // Every touched edge saturates once s >= 2.
    if ratio(2.0) < target {
        return Err(Error::Parameter(format!(
            "mixing profile cannot reach minority fraction {target}: at most {:.4} of edges touch a minority-affine node",
            ratio(2.0)
        )));
    }
    let (mut lo, mut hi) = (0.0, 2.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Pure function of `spec` (including its seed). Class 0 is the majority, class 1 the minority.
pub fn generate_planted_imbalance(spec: &PlantedImbalanceSpec) -> Result<(AttributedGraph, EdgeLabeling)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n_nodes;
    let k = spec.n_communities;

    let community: Vec<usize> = (0..n).map(|i| spec.community_of(i)).collect();
    let affinity: Vec<f64> = community
        .iter()
        .map(|&c| if rng.random::<f64>() < spec.mixing_profile[c] { 1.0 } else { 0.0 })
        .collect();

    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if community[u] == community[v] { spec.p_intra } else { spec.p_inter };
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        return Err(Error::Data("planted generator produced no edges".into()));
    }

    let touch: Vec<f64> = edges.iter().map(|&(u, v)| 0.5 * (affinity[u] + affinity[v])).collect();
    let scale = solve_scale(&touch, spec.minority_fraction)?;
    let labels: Vec<Option<usize>> = touch
        .iter()
        .map(|&t| Some(usize::from(rng.random::<f64>() < (scale * t).min(1.0))))
        .collect();

    let d = k + 1;
    let mut x = Matrix::zeros(n, d);
    for i in 0..n {
        let row = x.row_mut(i);
        row[community[i]] = 1.0;
        row[k] = spec.affinity_signal * affinity[i];
        for v in row.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v += spec.feature_noise * z;
        }
    }

    let mut s = Matrix::zeros(edges.len(), 2 * d);
    for (e, &(u, v)) in edges.iter().enumerate() {
        let (xu, xv) = (x.row(u).to_vec(), x.row(v).to_vec());
        let row = s.row_mut(e);
        for j in 0..d {
            row[j] = 0.5 * (xu[j] + xv[j]);
            row[d + j] = (xu[j] - xv[j]).abs();
        }
    }

    let graph = AttributedGraph::from_edges(n, &edges, Some(x), Some(s))?;
    let labeling = EdgeLabeling::new(2, labels)?;
    Ok((graph, labeling))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minority_ratio_near_target() {
        let spec = PlantedImbalanceSpec::default();
        let (g, l) = generate_planted_imbalance(&spec).unwrap();
        let counts = l.class_counts_in(None);
        let ratio = counts[1] as f64 / g.edge_count() as f64;
        assert!((0.07..=0.13).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn deterministic_for_seed() {
        let spec = PlantedImbalanceSpec::default();
        let a = generate_planted_imbalance(&spec).unwrap();
        let b = generate_planted_imbalance(&spec).unwrap();
        assert_eq!(a, b);
        let other = PlantedImbalanceSpec { seed: 1, ..spec };
        assert_ne!(a.0.edges(), generate_planted_imbalance(&other).unwrap().0.edges());
    }

    #[test]
    fn rejects_invalid_specs() {
        let base = PlantedImbalanceSpec::default();
        let zero = PlantedImbalanceSpec { p_intra: 0.0, p_inter: 0.0, ..base.clone() };
        assert!(generate_planted_imbalance(&zero).is_err());
        let bad_fraction = PlantedImbalanceSpec { minority_fraction: 0.6, ..base.clone() };
        assert!(generate_planted_imbalance(&bad_fraction).is_err());
        let bad_prob = PlantedImbalanceSpec { p_inter: 1.5, ..base.clone() };
        assert!(generate_planted_imbalance(&bad_prob).is_err());
        let short = PlantedImbalanceSpec { mixing_profile: vec![0.5], ..base.clone() };
        assert!(generate_planted_imbalance(&short).is_err());
        let unreachable = PlantedImbalanceSpec { mixing_profile: vec![0.0; 10], ..base };
        assert!(generate_planted_imbalance(&unreachable).is_err());
    }

    #[test]
    fn features_have_expected_shapes() {
        let spec = PlantedImbalanceSpec { n_nodes: 60, n_communities: 3, mixing_profile: vec![1.0, 0.0, 0.0], p_intra: 0.3, ..Default::default() };
        let (g, _) = generate_planted_imbalance(&spec).unwrap();
        assert_eq!(g.node_features().unwrap().cols(), 4);
        assert_eq!(g.edge_features().unwrap().cols(), 8);
        assert_eq!(g.edge_features().unwrap().rows(), g.edge_count());
    }
}
