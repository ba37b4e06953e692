//! Discrete wavelet packet transform with circular boundary handling, the
//! disjoint-dyadic basis type, and whiteness-driven best-basis selection.

use std::collections::BTreeMap;

use crate::diagnostics::ljung_box;
use crate::error::{Error, Result};

use super::filters::WaveletFilterPair;

/// Full packet table: level `j` holds `2^j` coefficient vectors of length
/// `N / 2^j`, level 0 being the input itself.
#[derive(Debug, Clone)]
pub struct PacketTree {
    levels: Vec<Vec<Vec<f64>>>,
    original_length: usize,
}

impl PacketTree {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    pub fn node(&self, j: usize, n: usize) -> Option<&[f64]> {
        self.levels.get(j).and_then(|lvl| lvl.get(n)).map(|v| v.as_slice())
    }

    /// Sum of squared coefficients across one full level.
    pub fn level_energy(&self, j: usize) -> f64 {
        self.levels[j]
            .iter()
            .map(|node| node.iter().map(|c| c * c).sum::<f64>())
            .sum()
    }
}

/// Whether band `n` at the next level is produced by the scaling filter.
///
/// The `n mod 4` rule keeps the packet table in frequency order, so node
/// `(j, n)` covers exactly `[n, n+1] / 2^{j+1}` cycles/sample.
fn uses_scaling_filter(n: usize) -> bool {
    matches!(n % 4, 0 | 3)
}

fn split_node(parent: &[f64], filters: &WaveletFilterPair, child_index: usize) -> Vec<f64> {
    let m = parent.len() as isize;
    let u = if uses_scaling_filter(child_index) { &filters.g } else { &filters.h };
    let half = parent.len() / 2;
    let mut child = vec![0.0; half];
    for (t, slot) in child.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (l, &coef) in u.iter().enumerate() {
            let idx = (2 * t as isize + 1 - l as isize).rem_euclid(m) as usize;
            acc += coef * parent[idx];
        }
        *slot = acc;
    }
    child
}

fn merge_children(
    low: &[f64],
    high: &[f64],
    filters: &WaveletFilterPair,
    low_index: usize,
) -> Vec<f64> {
    let m = 2 * low.len();
    let mi = m as isize;
    let u_low = if uses_scaling_filter(low_index) { &filters.g } else { &filters.h };
    let u_high = if uses_scaling_filter(low_index + 1) { &filters.g } else { &filters.h };
    let mut parent = vec![0.0; m];
    for t in 0..low.len() {
        for l in 0..filters.len() {
            let idx = (2 * t as isize + 1 - l as isize).rem_euclid(mi) as usize;
            parent[idx] += low[t] * u_low[l] + high[t] * u_high[l];
        }
    }
    parent
}

/// Level-by-level DWPT of a dyadic-length series down to `depth`.
///
/// The boundary is circular; non-dyadic input is rejected so the caller
/// decides explicitly how to pad or truncate.
pub fn dwpt(series: &[f64], filters: &WaveletFilterPair, depth: usize) -> Result<PacketTree> {
    let n = series.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::invalid(format!("DWPT needs a dyadic length, got {n}")));
    }
    let max_depth = n.trailing_zeros() as usize;
    if depth == 0 || depth > max_depth {
        return Err(Error::invalid(format!("depth {depth} out of range 1..={max_depth} for length {n}")));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("series contains non-finite values"));
    }

    let mut levels = Vec::with_capacity(depth + 1);
    levels.push(vec![series.to_vec()]);
    for j in 1..=depth {
        let prev = &levels[j - 1];
        let mut level = Vec::with_capacity(2 * prev.len());
        for (parent_idx, parent) in prev.iter().enumerate() {
            for child in [2 * parent_idx, 2 * parent_idx + 1] {
                level.push(split_node(parent, filters, child));
            }
        }
        levels.push(level);
    }
    Ok(PacketTree { levels, original_length: n })
}

/// A disjoint dyadic cover of the frequency interval [0, 1/2].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletBasis {
    nodes: Vec<(usize, usize)>,
}

impl WaveletBasis {
    /// Build a basis after checking the disjoint-cover invariant.
    pub fn new(mut nodes: Vec<(usize, usize)>) -> Result<Self> {
        nodes.sort_by_key(|&(j, n)| frequency_interval(j, n).0.to_bits());
        // intervals [n, n+1]/2^{j+1} tile [0, 1/2] iff sum of widths is 1/2
        // and consecutive intervals abut exactly.
        let mut expected_lo = 0.0;
        for &(j, n) in &nodes {
            if n >= (1usize << j) {
                return Err(Error::invalid(format!("band index {n} out of range at level {j}")));
            }
            let (lo, hi) = frequency_interval(j, n);
            if (lo - expected_lo).abs() > 1e-12 {
                return Err(Error::invalid(format!(
                    "basis does not tile [0, 1/2]: gap or overlap at frequency {expected_lo}"
                )));
            }
            expected_lo = hi;
        }
        if (expected_lo - 0.5).abs() > 1e-12 {
            return Err(Error::invalid("basis does not reach the Nyquist frequency"));
        }
        Ok(WaveletBasis { nodes })
    }

    pub fn nodes(&self) -> &[(usize, usize)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Frequency band `[n, n+1] / 2^{j+1}` (cycles/sample) of node `(j, n)`.
pub fn frequency_interval(j: usize, n: usize) -> (f64, f64) {
    let denom = (1u64 << (j + 1)) as f64;
    (n as f64 / denom, (n + 1) as f64 / denom)
}

/// Inverse DWPT from the coefficients at the nodes of a disjoint dyadic
/// basis; exact up to floating-point rounding for any valid basis.
pub fn idwpt(tree: &PacketTree, basis: &WaveletBasis, filters: &WaveletFilterPair) -> Result<Vec<f64>> {
    let mut pending: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for &(j, n) in basis.nodes() {
        let coeffs = tree
            .node(j, n)
            .ok_or_else(|| Error::invalid(format!("node ({j}, {n}) missing from tree")))?;
        pending.insert((j, n), coeffs.to_vec());
    }
    merge_to_root(pending, filters)
}

/// Reconstruct from an explicit node -> coefficients map (used when
/// synthesising from modified coefficients rather than a stored tree).
pub fn idwpt_from_nodes(
    nodes: BTreeMap<(usize, usize), Vec<f64>>,
    filters: &WaveletFilterPair,
) -> Result<Vec<f64>> {
    let basis_nodes: Vec<(usize, usize)> = nodes.keys().copied().collect();
    WaveletBasis::new(basis_nodes)?;
    merge_to_root(nodes, filters)
}

fn merge_to_root(
    mut pending: BTreeMap<(usize, usize), Vec<f64>>,
    filters: &WaveletFilterPair,
) -> Result<Vec<f64>> {
    while pending.len() > 1 || pending.keys().next().map(|&(j, _)| j) != Some(0) {
        let &(j, n) = pending
            .keys()
            .max_by_key(|&&(j, n)| (j, n))
            .ok_or_else(|| Error::invalid("empty basis"))?;
        let low_n = n & !1usize;
        let low = pending.remove(&(j, low_n)).ok_or_else(|| {
            Error::invalid(format!("incomplete cover: node ({j}, {low_n}) missing"))
        })?;
        let high = pending.remove(&(j, low_n + 1)).ok_or_else(|| {
            Error::invalid(format!("incomplete cover: node ({j}, {}) missing", low_n + 1))
        })?;
        let parent = merge_children(&low, &high, filters, low_n);
        pending.insert((j - 1, low_n / 2), parent);
    }
    pending
        .remove(&(0, 0))
        .ok_or_else(|| Error::invalid("reconstruction did not reach the root"))
}

/// Best-basis output: the selected cover plus non-fatal selection warnings.
#[derive(Debug, Clone)]
pub struct BasisSelection {
    pub basis: WaveletBasis,
    pub warnings: Vec<String>,
}

/// Top-down best-basis search driven by the Ljung-Box whiteness test: a node
/// whose coefficients look white (p >= alpha) becomes a leaf, everything else
/// is split until the tree depth is exhausted.
pub fn best_basis(tree: &PacketTree, alpha: f64) -> Result<BasisSelection> {
    best_basis_with_min_depth(tree, alpha, 0)
}

/// As [`best_basis`], but nodes shallower than `min_depth` are split
/// unconditionally. Likelihood fits need this: with the innovation variance
/// profiled out, a basis of fewer than a handful of bands carries little or
/// no information about the memory parameters (a single-node basis carries
/// none at all).
pub fn best_basis_with_min_depth(
    tree: &PacketTree,
    alpha: f64,
    min_depth: usize,
) -> Result<BasisSelection> {
    if !(0.0 < alpha && alpha <= 0.5) {
        return Err(Error::invalid("alpha must lie in (0, 0.5]"));
    }
    let depth = tree.depth();
    let mut warnings = Vec::new();
    let mut leaves = Vec::new();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((j, n)) = stack.pop() {
        if j == depth {
            leaves.push((j, n));
            continue;
        }
        if j < min_depth.min(depth) {
            stack.push((j + 1, 2 * n));
            stack.push((j + 1, 2 * n + 1));
            continue;
        }
        let coeffs = tree.node(j, n).expect("node within depth");
        let lags = (coeffs.len() / 4).min(10);
        if lags < 1 || coeffs.len() <= 2 * lags {
            warnings.push(format!(
                "node ({j}, {n}) too short for the whiteness test; kept as a leaf"
            ));
            leaves.push((j, n));
            continue;
        }
        match ljung_box(coeffs, lags) {
            Ok((_, p)) if p < alpha => {
                stack.push((j + 1, 2 * n));
                stack.push((j + 1, 2 * n + 1));
            }
            Ok(_) => leaves.push((j, n)),
            Err(_) => {
                // degenerate (e.g. all-zero) node: nothing left to split
                leaves.push((j, n));
            }
        }
    }
    Ok(BasisSelection { basis: WaveletBasis::new(leaves)?, warnings })
}

/// Per-node statistics for CSV export: `j,n,f_low,f_high,n_coeffs,energy,lb_p`.
pub fn basis_report(tree: &PacketTree, basis: &WaveletBasis) -> String {
    let mut out = String::from("j,n,f_low,f_high,n_coeffs,energy,lb_p\n");
    for &(j, n) in basis.nodes() {
        let coeffs = tree.node(j, n).unwrap_or(&[]);
        let (lo, hi) = frequency_interval(j, n);
        let energy: f64 = coeffs.iter().map(|c| c * c).sum();
        let lags = (coeffs.len() / 4).min(10);
        let lb_p = if lags >= 1 {
            ljung_box(coeffs, lags).map(|(_, p)| p).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        out.push_str(&format!("{j},{n},{lo},{hi},{},{energy},{lb_p}\n", coeffs.len()));
    }
    out
}
