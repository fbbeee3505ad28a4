//! Bilinear forms on the cycle lattice and the operators they induce.
//!
//! The lattice has one basis cycle per quiver vertex. The Seifert-type form J
//! has Gram array `J(g, g') = 1` on the diagonal and `-1` exactly when g is a
//! C0 cycle adjacent to the C1 cycle g'. Operators act in column coordinates,
//! so the matrix stored for a form is the transpose of its Gram array, and
//! the matrix of the composite of two operators is the ordinary product.
//!
//! Derived operators:
//! - transposed form tJ (Gram array transposed),
//! - degree-d intersection pairing `I(d) = (-1)^floor(d/2) J - (-1)^floor((d-1)/2) tJ`,
//!   which is 4-periodic in d and diagonal for even d,
//! - symmetrised pairing `J + tJ` (the Cartan operator; equals I(d) at d = 0 mod 4),
//! - variation-style complements `K = id - J` and `tK = id - tJ`, both square
//!   zero because the quiver has no directed 2-paths,
//! - class projectors onto the C0 and C1 coordinate blocks.
//!
//! J and tJ are unipotent: their inverses are `2 id - J` and `2 id - tJ`.

use crate::matrix::SparseMatrix;
use crate::quiver::{CycleClass, QuiverSpec};
use crate::{Error, IntMatrix, LatticeInt, Result};

/// What a lattice operator is, for reporting and for inverse eligibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorRole {
    /// Seifert-type form J.
    J,
    /// Transposed form tJ.
    JT,
    /// Inverse of J.
    JInverse,
    /// Inverse of tJ.
    JTInverse,
    /// Degree-d intersection pairing I(d).
    Intersection,
    /// Symmetrised pairing J + tJ.
    Cartan,
    /// id - J.
    K,
    /// id - tJ.
    KT,
    /// Coordinate projector onto a cycle class.
    Projector(CycleClass),
    /// In-class reflection product (degree-d).
    Sigma(CycleClass),
    /// Coxeter-type transformation (degree-d).
    Coxeter,
}

impl std::fmt::Display for OperatorRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OperatorRole::J => write!(f, "J"),
            OperatorRole::JT => write!(f, "tJ"),
            OperatorRole::JInverse => write!(f, "J^-1"),
            OperatorRole::JTInverse => write!(f, "tJ^-1"),
            OperatorRole::Intersection => write!(f, "I"),
            OperatorRole::Cartan => write!(f, "J+tJ"),
            OperatorRole::K => write!(f, "K"),
            OperatorRole::KT => write!(f, "tK"),
            OperatorRole::Projector(c) => write!(f, "pi[{c}]"),
            OperatorRole::Sigma(c) => write!(f, "sigma[{c}]"),
            OperatorRole::Coxeter => write!(f, "Cox"),
        }
    }
}

/// An integer operator on the cycle lattice of a fixed truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeOperator {
    pub quiver: QuiverSpec,
    pub role: OperatorRole,
    /// Degree of the ambient smoothing, where the operator depends on it.
    pub degree: Option<u32>,
    /// Action in column coordinates.
    pub matrix: IntMatrix,
}

impl LatticeOperator {
    /// Gram array of the bilinear form this operator represents
    /// (the transpose of the stored action matrix).
    pub fn gram(&self) -> IntMatrix {
        self.matrix.transpose()
    }

    pub fn len(&self) -> usize {
        self.quiver.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quiver.is_empty()
    }
}

/// The form J as an operator: identity minus the C1-to-adjacent-C0 arrows.
pub fn build_j(q: &QuiverSpec) -> LatticeOperator {
    let l = q.len();
    let mut triplets: Vec<(usize, usize, LatticeInt)> = (0..l).map(|i| (i, i, 1)).collect();
    for &(tail, head) in &q.edges {
        triplets.push((tail, head, -1));
    }
    LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::J,
        degree: None,
        matrix: SparseMatrix::from_triplets(l, l, triplets),
    }
}

/// The transposed form tJ as an operator.
pub fn build_jt(q: &QuiverSpec) -> LatticeOperator {
    let j = build_j(q);
    LatticeOperator {
        quiver: j.quiver,
        role: OperatorRole::JT,
        degree: None,
        matrix: j.matrix.transpose(),
    }
}

fn parity_sign(e: i64) -> LatticeInt {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Degree-d intersection pairing `I(d)`. 4-periodic in d; for even d it is
/// `(-1)^(d/2) * 2 * id`, for odd d it is antisymmetric.
pub fn build_i(q: &QuiverSpec, d: u32) -> LatticeOperator {
    let d = d as i64;
    let sign_j = parity_sign((d).div_euclid(2));
    let sign_jt = -parity_sign((d - 1).div_euclid(2));
    let j = build_j(q).matrix;
    let jt = j.transpose();
    LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::Intersection,
        degree: Some(d as u32),
        matrix: j.scale(sign_j).add(&jt.scale(sign_jt)),
    }
}

/// Symmetrised pairing `J + tJ`: twice the identity minus the adjacency
/// matrix. On finite subdiagrams this is the Cartan matrix of the
/// corresponding root system.
pub fn cartan_operator(q: &QuiverSpec) -> LatticeOperator {
    let j = build_j(q).matrix;
    let jt = j.transpose();
    LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::Cartan,
        degree: None,
        matrix: j.add(&jt),
    }
}

/// `K = id - J`, supported on the arrows only; `K^2 = 0`.
pub fn k_operator(q: &QuiverSpec) -> LatticeOperator {
    let l = q.len();
    let j = build_j(q).matrix;
    LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::K,
        degree: None,
        matrix: SparseMatrix::identity(l).sub(&j),
    }
}

/// `tK = id - tJ`; `tK^2 = 0`.
pub fn kt_operator(q: &QuiverSpec) -> LatticeOperator {
    let l = q.len();
    let jt = build_jt(q).matrix;
    LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::KT,
        degree: None,
        matrix: SparseMatrix::identity(l).sub(&jt),
    }
}

/// Coordinate projector onto the given cycle class.
pub fn projector(q: &QuiverSpec, class: CycleClass) -> LatticeOperator {
    let l = q.len();
    let triplets: Vec<(usize, usize, LatticeInt)> = (0..l)
        .filter(|&i| q.class(i) == class)
        .map(|i| (i, i, 1))
        .collect();
    LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::Projector(class),
        degree: None,
        matrix: SparseMatrix::from_triplets(l, l, triplets),
    }
}

/// Exact inverse of a unipotent form operator (J or tJ only): `2 id - M`.
/// Verifies `M * inv = id` exactly before returning.
pub fn inverse(op: &LatticeOperator) -> Result<LatticeOperator> {
    let role = match op.role {
        OperatorRole::J => OperatorRole::JInverse,
        OperatorRole::JT => OperatorRole::JTInverse,
        other => return Err(Error::NotUnipotent { role: other }),
    };
    let l = op.len();
    let inv = SparseMatrix::identity(l).scale(2).sub(&op.matrix);
    let prod = op.matrix.matmul(&inv);
    if !prod.is_identity() {
        return Err(Error::Invariant {
            context: "inverse",
            message: format!("2 id - {} is not a two-sided inverse", op.role),
        });
    }
    Ok(LatticeOperator {
        quiver: op.quiver.clone(),
        role,
        degree: op.degree,
        matrix: inv,
    })
}

/// Deterministic power-iteration estimate of the spectral norm of a real
/// matrix M, via the top eigenvalue of M^T M. The start vector breaks
/// sign symmetries; iteration count is fixed for reproducibility.
pub fn spectral_norm_estimate(m: &SparseMatrix<f64>) -> f64 {
    let n = m.ncols();
    if n == 0 {
        return 0.0;
    }
    let mt = m.transpose();
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + (i as f64) / (n as f64 + 1.0))
        .collect();
    let mut rayleigh = 0.0_f64;
    for _ in 0..500 {
        let w = mt.mul_vec(&m.mul_vec(&v));
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let next_rayleigh: f64 = next
            .iter()
            .zip(mt.mul_vec(&m.mul_vec(&next)).iter())
            .map(|(a, b)| a * b)
            .sum();
        let done = (next_rayleigh - rayleigh).abs() <= 1e-14 * (1.0 + next_rayleigh.abs());
        v = next;
        rayleigh = next_rayleigh;
        if done {
            break;
        }
    }
    rayleigh.max(0.0).sqrt()
}

/// Spectral norms of (K, tK) for the truncation, by power iteration.
pub fn variation_norms(q: &QuiverSpec) -> (f64, f64) {
    let k = k_operator(q).matrix.to_real_sparse();
    let kt = kt_operator(q).matrix.to_real_sparse();
    (spectral_norm_estimate(&k), spectral_norm_estimate(&kt))
}
