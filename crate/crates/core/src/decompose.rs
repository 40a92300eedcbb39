//! Recognizing lacunary and triangular support systems.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{mixed_volume, mv_zero_witness};
use crate::intlinalg::{smith_normal_form, LatticeMatrix};
use crate::subsets::subsets_by_size;
use crate::supports::{
    normalize, preimage_supports, span_rank, LatticeSplitting, Reindex, SupportSystem,
};

/// Change of coordinates for a lacunary system. All data refers to the
/// normalized supports (every support translated to contain the origin).
#[derive(Clone, Debug)]
pub struct LacunaryData {
    /// `P * diag(d)`; its image is the lattice spanned by the supports.
    pub phi: LatticeMatrix,
    /// `P^{-1}`. `x = Psi(w)` has `x_j = w^{column j of psi}`.
    pub psi: LatticeMatrix,
    pub factors: Vec<u64>,
    pub preimage: SupportSystem,
    pub reindex: Reindex,
}

impl LacunaryData {
    /// Index of the lattice spanned by the supports in `Z^n`.
    pub fn index(&self) -> u64 {
        self.factors.iter().product()
    }
}

/// Change of coordinates for a triangular system.
#[derive(Clone, Debug)]
pub struct TriangularData {
    /// Polynomials whose supports span a sublattice of rank `|witness|`.
    pub witness: Vec<usize>,
    /// The remaining polynomials, in increasing order.
    pub complement: Vec<usize>,
    pub splitting: LatticeSplitting,
}

impl TriangularData {
    pub fn k(&self) -> usize {
        self.witness.len()
    }

    /// Base supports in `Z^k` and generic fiber supports in `Z^{n-k}`.
    pub fn split_supports(
        &self,
        normalized: &SupportSystem,
    ) -> Result<(SupportSystem, SupportSystem)> {
        let base = self
            .witness
            .iter()
            .map(|&i| self.splitting.base_support(normalized.support(i)))
            .collect::<Result<Vec<_>>>()?;
        let fiber = self
            .complement
            .iter()
            .map(|&j| self.splitting.quotient_support(normalized.support(j)))
            .collect();
        Ok((SupportSystem::new(base)?, SupportSystem::new(fiber)?))
    }
}

#[derive(Clone, Debug)]
pub enum Classification {
    Lacunary(LacunaryData),
    Triangular(TriangularData),
    Indecomposable,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Lacunary(_) => "lacunary",
            Classification::Triangular(_) => "triangular",
            Classification::Indecomposable => "indecomposable",
        }
    }
}

fn lacunary_data(normalized: &SupportSystem) -> Result<Option<LacunaryData>> {
    let n = normalized.n();
    let m = normalized
        .difference_matrix(&(0..n).collect::<Vec<_>>())
        .ok_or(Error::ZeroMatrix)?;
    let snf = smith_normal_form(&m)?;
    if snf.rank() < n {
        return Err(Error::RankCondition {
            subset: (0..n).collect(),
            rank: snf.rank(),
            expected: n,
        });
    }
    if snf.invariant_factors.iter().all(|d| d.is_one()) {
        return Ok(None);
    }
    let factors: Vec<u64> = snf
        .invariant_factors
        .iter()
        .map(|d| d.to_u64().ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    let mut diag = LatticeMatrix::zeros(n, n);
    for (i, &d) in factors.iter().enumerate() {
        diag.set(i, i, BigInt::from(d));
    }
    let phi = snf.p.mul(&diag);
    let (preimage, reindex) = preimage_supports(normalized, &phi)?;
    Ok(Some(LacunaryData {
        phi,
        psi: snf.p_inv,
        factors,
        preimage,
        reindex,
    }))
}

/// Triangular data for an explicitly chosen witness.
pub fn triangular_with_witness(
    system: &SupportSystem,
    witness: &[usize],
) -> Result<TriangularData> {
    let n = system.n();
    let mut witness = witness.to_vec();
    witness.sort_unstable();
    witness.dedup();
    if witness.is_empty() || witness.len() >= n || witness.iter().any(|&i| i >= n) {
        return Err(Error::InvalidSystem(format!(
            "{witness:?} is not a proper nonempty subset of 0..{n}"
        )));
    }
    let (normalized, _) = normalize(system);
    let splitting = LatticeSplitting::new(&normalized, &witness)?;
    let complement = (0..n).filter(|i| !witness.contains(i)).collect();
    Ok(TriangularData {
        witness,
        complement,
        splitting,
    })
}

/// Lacunary test on the whole system first, then the smallest triangular
/// witness (by size, then lexicographic).
pub fn classify(system: &SupportSystem) -> Result<Classification> {
    if let Some(witness) = mv_zero_witness(system) {
        return Err(Error::ZeroMixedVolume { witness });
    }
    let (normalized, _) = normalize(system);
    if let Some(data) = lacunary_data(&normalized)? {
        return Ok(Classification::Lacunary(data));
    }
    let n = system.n();
    if n < 2 {
        return Ok(Classification::Indecomposable);
    }
    match subsets_by_size(n, 1..=n - 1).find(|s| span_rank(&normalized, s) == s.len()) {
        Some(witness) => Ok(Classification::Triangular(triangular_with_witness(
            system, &witness,
        )?)),
        None => Ok(Classification::Indecomposable),
    }
}

/// `1 < MV(A_I) < MV(A)` for a triangular witness `I`.
pub fn is_strictly_triangular(system: &SupportSystem, witness: &[usize]) -> Result<bool> {
    let data = triangular_with_witness(system, witness)?;
    let (normalized, _) = normalize(system);
    let (base, _) = data.split_supports(&normalized)?;
    let base_mv = mixed_volume(&base);
    Ok(1 < base_mv && base_mv < mixed_volume(system))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeKind {
    Lacunary {
        factors: Vec<u64>,
        index: u64,
    },
    Triangular {
        witness: Vec<usize>,
    },
    Blackbox,
    Univariate,
    /// Parameter homotopy from a start system to the target.
    Homotopy,
}

/// Path counts charged to a single node (children excluded).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathLedger {
    /// Solutions produced by a multivariate blackbox call, one path each.
    pub blackbox_paths: u64,
    /// Paths the blackbox actually tracked (total-degree start system).
    pub total_degree_paths: u64,
    pub fiber_homotopies: u64,
    pub fiber_paths: u64,
    pub homotopy_paths: u64,
    /// Extra paths spent on re-randomized retries.
    pub retry_paths: u64,
}

impl PathLedger {
    /// Paths in the accounting that charges a blackbox call its solution count.
    pub fn paths(&self) -> u64 {
        self.blackbox_paths + self.fiber_paths + self.homotopy_paths
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTree {
    pub kind: NodeKind,
    pub n: usize,
    pub mv: u64,
    pub ledger: PathLedger,
    pub elapsed_ms: f64,
    pub children: Vec<DecompositionTree>,
}

impl DecompositionTree {
    pub fn leaf(kind: NodeKind, n: usize, mv: u64) -> Self {
        DecompositionTree {
            kind,
            n,
            mv,
            ledger: PathLedger::default(),
            elapsed_ms: 0.0,
            children: Vec::new(),
        }
    }

    pub fn total_paths(&self) -> u64 {
        self.ledger.paths() + self.children.iter().map(|c| c.total_paths()).sum::<u64>()
    }

    pub fn total_retry_paths(&self) -> u64 {
        self.ledger.retry_paths
            + self
                .children
                .iter()
                .map(|c| c.total_retry_paths())
                .sum::<u64>()
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&DecompositionTree> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    pub fn blackbox_calls(&self) -> usize {
        self.nodes()
            .iter()
            .filter(|t| matches!(t.kind, NodeKind::Blackbox | NodeKind::Univariate))
            .count()
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match &self.kind {
            NodeKind::Lacunary { factors, index } => write!(
                f,
                "{pad}lacunary, index {index} (factors {factors:?}); n {}, MV {}",
                self.n, self.mv
            )?,
            NodeKind::Triangular { witness } => {
                let one_based: Vec<usize> = witness.iter().map(|i| i + 1).collect();
                let parts: Vec<String> = self.children.iter().map(|c| c.mv.to_string()).collect();
                write!(
                    f,
                    "{pad}triangular, I = {one_based:?}; n {}, MV {} = {}",
                    self.n,
                    parts.join(" x "),
                    self.mv
                )?
            }
            NodeKind::Blackbox => write!(
                f,
                "{pad}indecomposable, blackbox; n {}, MV {}",
                self.n, self.mv
            )?,
            NodeKind::Univariate => write!(f, "{pad}univariate, degree {}", self.mv)?,
            NodeKind::Homotopy => {
                write!(f, "{pad}parameter homotopy; n {}, MV {}", self.n, self.mv)?
            }
        }
        writeln!(f)?;
        for c in &self.children {
            c.fmt_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indented(f, 0)
    }
}

/// Predicted decomposition of a generic system with these supports, with the
/// path ledger a solve would produce when no retries are needed.
pub fn analyze(system: &SupportSystem) -> Result<DecompositionTree> {
    let n = system.n();
    match classify(system)? {
        Classification::Lacunary(data) => {
            let child = analyze(&data.preimage)?;
            let index = data.index();
            let mut node = DecompositionTree::leaf(
                NodeKind::Lacunary {
                    factors: data.factors.clone(),
                    index,
                },
                n,
                index * child.mv,
            );
            node.children.push(child);
            Ok(node)
        }
        Classification::Triangular(data) => {
            let (normalized, _) = normalize(system);
            let (base, fiber) = data.split_supports(&normalized)?;
            let base_tree = analyze(&base)?;
            let fiber_tree = analyze(&fiber)?;
            let mut node = DecompositionTree::leaf(
                NodeKind::Triangular {
                    witness: data.witness.clone(),
                },
                n,
                base_tree.mv * fiber_tree.mv,
            );
            let transfers = base_tree.mv.saturating_sub(1);
            node.ledger.fiber_homotopies = transfers;
            node.ledger.fiber_paths = transfers * fiber_tree.mv;
            node.children = vec![base_tree, fiber_tree];
            Ok(node)
        }
        Classification::Indecomposable => {
            let mv = mixed_volume(system);
            if n == 1 {
                Ok(DecompositionTree::leaf(NodeKind::Univariate, 1, mv))
            } else {
                let mut node = DecompositionTree::leaf(NodeKind::Blackbox, n, mv);
                node.ledger.blackbox_paths = mv;
                Ok(node)
            }
        }
    }
}
