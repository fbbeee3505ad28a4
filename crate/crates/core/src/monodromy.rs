//! Picard-Lefschetz reflections and the Coxeter-type transformation.
//!
//! For suspension degree d, the two in-class reflection products act on
//! basis cycles by
//!
//! - `sigma0`: a C0 cycle g maps to (-1)^(d-1) g; a C1 cycle u maps to
//!   `u - sum_{g in C0} J(g, u) g`, which adds every adjacent C0 cycle once.
//! - `sigma1`: a C1 cycle g maps to (-1)^(d-1) g; a C0 cycle u maps to
//!   `u - (-1)^(d-1) sum_{g in C1} J(u, g) g`, adding (-1)^d times every
//!   adjacent C1 cycle.
//!
//! Both depend on d only through its parity; for even d they are
//! involutions, for odd d they are the unipotent form operators themselves
//! (`sigma0 = (tJ)^-1`, `sigma1 = J` at d = 1).
//!
//! The composite `cox = sigma0 after sigma1` factors exactly as
//! `(-1)^(d-1) (tJ)^-1 J`, has determinant (-1)^((d-1) l), preserves the
//! degree-d intersection pairing, and on a size-l truncation has finite
//! order: l + 1 in type A and 2(l - 1) in type D (even d), growing without
//! bound with l.

use crate::forms::{build_i, build_j, build_jt, inverse, LatticeOperator, OperatorRole};
use crate::matrix::SparseMatrix;
use crate::quiver::{CycleClass, QuiverSpec};
use crate::{Error, LatticeInt, Result};

fn degree_sign(d: u32) -> LatticeInt {
    if d % 2 == 1 {
        1
    } else {
        -1
    }
}

fn check_degree(context: &'static str, d: u32) -> Result<()> {
    if d < 1 {
        return Err(Error::Invariant {
            context,
            message: "suspension degree must be >= 1".into(),
        });
    }
    Ok(())
}

/// The degree-d reflection product over one cycle class. `class` names the
/// cycles that are reflected (scaled by (-1)^(d-1)); cycles of the other
/// class pick up their adjacent `class` cycles.
pub fn sigma(q: &QuiverSpec, class: CycleClass, d: u32) -> Result<LatticeOperator> {
    check_degree("sigma", d)?;
    let l = q.len();
    let refl = degree_sign(d); // (-1)^(d-1)
    let off = match class {
        CycleClass::C0 => 1,     // -J(g, u) with J = -1
        CycleClass::C1 => -refl, // -(-1)^(d-1) J(u, g) with J = -1
    };
    let mut triplets: Vec<(usize, usize, LatticeInt)> = Vec::new();
    for b in 0..l {
        if q.class(b) == class {
            triplets.push((b, b, refl));
        } else {
            triplets.push((b, b, 1));
            for c in q.neighbors(b) {
                debug_assert_eq!(q.class(c), class);
                triplets.push((c, b, off));
            }
        }
    }
    Ok(LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::Sigma(class),
        degree: Some(d),
        matrix: SparseMatrix::from_triplets(l, l, triplets),
    })
}

/// Coxeter-type transformation: apply the C1 reflection first, then the C0
/// reflection, as a product of column-coordinate matrices.
pub fn coxeter(q: &QuiverSpec, d: u32) -> Result<LatticeOperator> {
    let s0 = sigma(q, CycleClass::C0, d)?;
    let s1 = sigma(q, CycleClass::C1, d)?;
    Ok(LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::Coxeter,
        degree: Some(d),
        matrix: s0.matrix.matmul(&s1.matrix),
    })
}

/// The closed factored form `(-1)^(d-1) (tJ)^-1 J` of the same
/// transformation; must agree with [`coxeter`] entry for entry.
pub fn coxeter_factored(q: &QuiverSpec, d: u32) -> Result<LatticeOperator> {
    check_degree("coxeter_factored", d)?;
    let j = build_j(q);
    let jt_inv = inverse(&build_jt(q))?;
    Ok(LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::Coxeter,
        degree: Some(d),
        matrix: jt_inv.matrix.matmul(&j.matrix).scale(degree_sign(d)),
    })
}

/// Exact inverse transformation `(-1)^(d-1) J^-1 tJ`.
pub fn coxeter_inverse(q: &QuiverSpec, d: u32) -> Result<LatticeOperator> {
    check_degree("coxeter_inverse", d)?;
    let jt = build_jt(q);
    let j_inv = inverse(&build_j(q))?;
    Ok(LatticeOperator {
        quiver: q.clone(),
        role: OperatorRole::Coxeter,
        degree: Some(d),
        matrix: j_inv.matrix.matmul(&jt.matrix).scale(degree_sign(d)),
    })
}

/// Outcome of the finite-order search for the transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordOrder {
    /// Smallest k >= 1 with the k-th power equal to the identity.
    Finite(usize),
    /// No power up to the budget reached the identity.
    ExceedsBudget(usize),
}

/// Smallest k <= max_k with `cox^k = id`, by exact integer powers.
/// Requires even d so that both reflection factors are involutions.
pub fn word_order(q: &QuiverSpec, d: u32, max_k: usize) -> Result<WordOrder> {
    check_degree("word_order", d)?;
    if !d.is_multiple_of(2) {
        return Err(Error::Invariant {
            context: "word_order",
            message: format!("degree must be even, got {d}"),
        });
    }
    let cox = coxeter(q, d)?.matrix;
    let mut power = cox.clone();
    for k in 1..=max_k {
        if power.is_identity() {
            return Ok(WordOrder::Finite(k));
        }
        power = power.matmul(&cox);
    }
    Ok(WordOrder::ExceedsBudget(max_k))
}

/// Exact check that `op` preserves the degree-d intersection pairing:
/// `M^T G M = G` with G the Gram array of the pairing.
pub fn preserves_intersection(op: &LatticeOperator, d: u32) -> bool {
    let g = build_i(&op.quiver, d).gram();
    op.matrix.transpose().matmul(&g).matmul(&op.matrix) == g
}
