//! Critical points of the two surface families on the real axis.
//!
//! Both surfaces fiber over the (x, y) chart through
//! `f_A(x, y) = x s(x)^2 - y^2` and `f_D(x, y) = x s(x)^2 - x y^2`.
//! All critical points on the line y = 0 are governed by the factor
//! `d/dx (x s^2) = c s`, so they sit at the zeros of s (x = n^2 pi^2,
//! critical value 0) and the zeros of c (x = (n - 1/2)^2 pi^2, critical
//! value 1). The D family has two extra critical points at (0, +-1), also
//! with critical value 0.
//!
//! Zeros are refined by a bisection-safeguarded Newton iteration started from
//! the closed-form seeds; each refined point is classified by its gradient
//! norm and the signature of its Hessian.

use crate::entire::{c, c_prime, f_real, s, s_prime};
use crate::quiver::{CycleClass, Family, QuiverKind, QuiverSpec, Vertex, VertexLabel};
use crate::{Error, Result};

/// Sign pattern of the 2x2 Hessian at a nondegenerate critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HessianSignature {
    /// Both eigenvalues negative: a local maximum (bounded component peak).
    NegativeDefinite,
    /// One eigenvalue of each sign: a nodal point of the real locus.
    Indefinite,
}

impl std::fmt::Display for HessianSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HessianSignature::NegativeDefinite => write!(f, "negative_definite"),
            HessianSignature::Indefinite => write!(f, "indefinite"),
        }
    }
}

/// One refined critical point together with its classification data.
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub family: Family,
    pub class: CycleClass,
    /// Printable identity: `n` for the n-th on-axis point, `b0+`/`b0-` for
    /// the exceptional pair of the D family.
    pub label: String,
    pub x: f64,
    pub y: f64,
    pub critical_value: f64,
    pub grad_norm: f64,
    pub hessian: HessianSignature,
}

/// Bisection-safeguarded Newton iteration for a bracketed simple zero.
///
/// `lo < hi` must bracket a sign change. Newton steps that leave the current
/// bracket, or divide by a vanishing derivative, fall back to bisection; the
/// bracket shrinks monotonically either way. Converges when the update is
/// below `1e-15 * (1 + |x|)`.
pub fn refine_zero(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    seed: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    let mut x = seed.clamp(lo, hi);
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        // keep the bracket tight around the sign change
        if fx.signum() == flo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let dfx = df(x);
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step < 1e-15 * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        budget: 100,
        last_x: x,
    })
}

const PI: f64 = std::f64::consts::PI;

/// Refined x-coordinate of the n-th zero of s (n >= 1), near n^2 pi^2.
pub fn node_x(n: usize) -> Result<f64> {
    let n = n as f64;
    let seed = (n * PI).powi(2);
    let lo = ((n - 0.5) * PI).powi(2);
    let hi = ((n + 0.5) * PI).powi(2);
    refine_zero(s::<f64>, s_prime::<f64>, seed, lo, hi)
}

/// Refined x-coordinate of the n-th zero of c (n >= 1), near (n-1/2)^2 pi^2.
pub fn peak_x(n: usize) -> Result<f64> {
    let n = n as f64;
    let seed = ((n - 0.5) * PI).powi(2);
    let lo = ((n - 1.0) * PI).powi(2).max(0.0);
    let hi = (n * PI).powi(2);
    refine_zero(c::<f64>, |x| -0.5 * s(x), seed, lo, hi)
}

fn gradient(family: Family, x: f64, y: f64) -> (f64, f64) {
    let cs = c(x) * s(x);
    match family {
        Family::A => (cs, -2.0 * y),
        Family::D => (cs - y * y, -2.0 * x * y),
    }
}

/// d/dx (c s) at x, the on-axis second derivative of x s(x)^2 divided by 2.
fn cs_prime(x: f64) -> f64 {
    c(x) * s_prime(x) + c_prime(x) * s(x)
}

fn classify(family: Family, x: f64, y: f64) -> HessianSignature {
    let (h_xx, h_xy, h_yy) = if y == 0.0 {
        let d = 2.0 * cs_prime(x);
        match family {
            Family::A => (d, 0.0, -2.0),
            Family::D => (d, 0.0, -2.0 * x),
        }
    } else {
        // only the exceptional D points leave the axis
        (2.0 * cs_prime(x), -2.0 * y, -2.0 * x)
    };
    let det = h_xx * h_yy - h_xy * h_xy;
    if det < 0.0 {
        HessianSignature::Indefinite
    } else {
        debug_assert!(h_xx + h_yy < 0.0);
        HessianSignature::NegativeDefinite
    }
}

fn point(family: Family, class: CycleClass, label: String, x: f64, y: f64) -> CriticalPoint {
    let (gx, gy) = gradient(family, x, y);
    CriticalPoint {
        family,
        class,
        label,
        x,
        y,
        critical_value: f_real(family, x, y),
        grad_norm: gx.hypot(gy),
        hessian: classify(family, x, y),
    }
}

/// The first `n_max` critical points of each class, refined and classified.
///
/// Ordering: the C1 points (critical value 1) by increasing x, then the C0
/// points; for the D family the two exceptional points (0, +-1) precede the
/// on-axis nodal points.
pub fn critical_points(family: Family, n_max: usize) -> Result<Vec<CriticalPoint>> {
    if n_max < 1 {
        return Err(Error::CountBelowMinimum {
            context: "critical_points",
            n_max,
            min: 1,
        });
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(point(
            family,
            CycleClass::C1,
            n.to_string(),
            peak_x(n)?,
            0.0,
        ));
    }
    if family == Family::D {
        out.push(point(family, CycleClass::C0, "b0+".into(), 0.0, 1.0));
        out.push(point(family, CycleClass::C0, "b0-".into(), 0.0, -1.0));
    }
    for n in 1..=n_max {
        out.push(point(
            family,
            CycleClass::C0,
            n.to_string(),
            node_x(n)?,
            0.0,
        ));
    }
    Ok(out)
}

/// Rebuild the truncated quiver from refined geometry alone.
///
/// Each refined peak is matched to the interval between consecutive nodal
/// x-values it lies in; a peak and a node are adjacent exactly when the node
/// bounds that interval. The exceptional D points attach to the first peak,
/// whose bounded component contains x = 0. Uses the first `n_max` points of
/// each class, so the result has 2 n_max vertices (2 n_max + 2 for D) and
/// must coincide with the combinatorial constructor on that range.
pub fn adjacency_from_geometry(family: Family, n_max: usize) -> Result<QuiverSpec> {
    if n_max < 1 {
        return Err(Error::CountBelowMinimum {
            context: "adjacency_from_geometry",
            n_max,
            min: 1,
        });
    }
    let nodes: Vec<f64> = (1..=n_max).map(node_x).collect::<Result<_>>()?;
    let peaks: Vec<f64> = (1..=n_max).map(peak_x).collect::<Result<_>>()?;

    // vertex order of the combinatorial constructor
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let vertex_of_peak = |k: usize| -> usize {
        // peak k (1-based) in quiver coordinates
        match family {
            Family::A => 2 * (k - 1),
            Family::D => 2 * k,
        }
    };
    let vertex_of_node = |n: usize| -> usize {
        match family {
            Family::A => 2 * n - 1,
            Family::D => 2 * n + 1,
        }
    };
    let size = match family {
        Family::A => 2 * n_max,
        Family::D => 2 * n_max + 2,
    };
    vertices.resize(
        size,
        Vertex {
            label: VertexLabel::A(0),
            class: CycleClass::C0,
        },
    );
    if family == Family::D {
        vertices[0] = Vertex {
            label: VertexLabel::BPlus,
            class: CycleClass::C0,
        };
        vertices[1] = Vertex {
            label: VertexLabel::BMinus,
            class: CycleClass::C0,
        };
    }
    for (i, &px) in peaks.iter().enumerate() {
        let k = i + 1;
        let v = vertex_of_peak(k);
        vertices[v] = Vertex {
            label: match family {
                Family::A => VertexLabel::A(v),
                Family::D => VertexLabel::B(v - 1),
            },
            class: CycleClass::C1,
        };
        // nodal x-values bounding the bounded component of this peak
        let left = if k >= 2 { Some(nodes[k - 2]) } else { None };
        let right = nodes.get(k - 1).copied();
        if let Some(lx) = left {
            assert!(lx < px, "peak {k} must lie right of node {}", k - 1);
            edges.push((v, vertex_of_node(k - 1)));
        } else if family == Family::D {
            // the first component contains x = 0, hence both points (0, +-1)
            assert!(px > 0.0);
            edges.push((v, 0));
            edges.push((v, 1));
        }
        if let Some(rx) = right {
            assert!(px < rx, "peak {k} must lie left of node {k}");
            edges.push((v, vertex_of_node(k)));
        }
    }
    for (i, _) in nodes.iter().enumerate() {
        let n = i + 1;
        let v = vertex_of_node(n);
        vertices[v] = Vertex {
            label: match family {
                Family::A => VertexLabel::A(v),
                Family::D => VertexLabel::B(v - 1),
            },
            class: CycleClass::C0,
        };
    }
    edges.sort_unstable();
    Ok(QuiverSpec {
        kind: QuiverKind::Truncated(family),
        vertices,
        edges,
    })
}
