//! Finite truncations of the two half-infinite bipartite quivers.
//!
//! Vertices are basis cycles. Every vertex carries a class: `C0` (cycles over
//! the nodal points, critical value 0) or `C1` (cycles over the bounded
//! components, critical value 1). Edges are stored tail in `C1`, head in
//! `C0`, one per unordered adjacency.
//!
//! Type A truncation of size l is the alternating path
//! `a0 -> a1 <- a2 -> a3 ...` starting in `C1`. Type D of size l prepends the
//! two exceptional `C0` cycles `b0+`, `b0-`, both attached to the first path
//! vertex `b1`; the rest is the alternating path `b1 -> b2 <- b3 ...`. Taking
//! the first l vertices of the size-(l+1) truncation reproduces the size-l
//! truncation exactly, so the family is coherent under truncation.

use crate::{Error, Result};

/// Surface/quiver family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    D,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::D => write!(f, "D"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            other => Err(format!("unknown family {other:?}, expected A or D")),
        }
    }
}

/// Distinguishes truncations of the half-infinite quivers from the classical
/// finite diagrams. The structures coincide; reports keep the intent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuiverKind {
    Truncated(Family),
    Finite(Family),
}

impl QuiverKind {
    pub fn family(self) -> Family {
        match self {
            QuiverKind::Truncated(f) | QuiverKind::Finite(f) => f,
        }
    }
}

/// Bipartite class of a basis cycle: over a nodal point (critical value 0) or
/// over a bounded connected component (critical value 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleClass {
    C0,
    C1,
}

impl std::fmt::Display for CycleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CycleClass::C0 => write!(f, "C0"),
            CycleClass::C1 => write!(f, "C1"),
        }
    }
}

/// Printable vertex identity within its family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexLabel {
    /// Path vertex of type A: `a{index}`.
    A(usize),
    /// Path vertex of type D: `b{index}`, index >= 1.
    B(usize),
    /// Exceptional cycle `b0+` of type D.
    BPlus,
    /// Exceptional cycle `b0-` of type D.
    BMinus,
}

impl std::fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexLabel::A(i) => write!(f, "a{i}"),
            VertexLabel::B(i) => write!(f, "b{i}"),
            VertexLabel::BPlus => write!(f, "b0+"),
            VertexLabel::BMinus => write!(f, "b0-"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Vertex {
    pub label: VertexLabel,
    pub class: CycleClass,
}

/// A finite truncation: ordered vertices plus directed edges (tail in C1,
/// head in C0), sorted by (tail, head).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverSpec {
    pub kind: QuiverKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

impl QuiverSpec {
    pub fn family(&self) -> Family {
        self.kind.family()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn class(&self, i: usize) -> CycleClass {
        self.vertices[i].class
    }

    /// Indices of the vertices in the given class, ascending.
    pub fn class_indices(&self, class: CycleClass) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.class(i) == class)
            .collect()
    }

    /// Undirected neighbours of vertex i, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(t, h)| {
                if t == i {
                    Some(h)
                } else if h == i {
                    Some(t)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(t, h)| t == i || h == i)
            .count()
    }

    /// The induced sub-quiver on the first `l` vertices.
    pub fn truncate(&self, l: usize) -> QuiverSpec {
        assert!(l <= self.len());
        QuiverSpec {
            kind: self.kind,
            vertices: self.vertices[..l].to_vec(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|&(t, h)| t < l && h < l)
                .collect(),
        }
    }
}

fn build(kind: QuiverKind, size: usize) -> Result<QuiverSpec> {
    let family = kind.family();
    let min = match family {
        Family::A => 1,
        Family::D => 4,
    };
    if size < min {
        return Err(Error::SizeBelowMinimum { family, size, min });
    }
    let mut vertices = Vec::with_capacity(size);
    let mut edges = Vec::new();
    match family {
        Family::A => {
            // a_{2k} covers the (k+1)-th bounded component, a_{2k+1} the (k+1)-th node
            for i in 0..size {
                let class = if i % 2 == 0 {
                    CycleClass::C1
                } else {
                    CycleClass::C0
                };
                vertices.push(Vertex {
                    label: VertexLabel::A(i),
                    class,
                });
            }
            for tail in (0..size).step_by(2) {
                if tail >= 1 {
                    edges.push((tail, tail - 1));
                }
                if tail + 1 < size {
                    edges.push((tail, tail + 1));
                }
            }
        }
        Family::D => {
            vertices.push(Vertex {
                label: VertexLabel::BPlus,
                class: CycleClass::C0,
            });
            vertices.push(Vertex {
                label: VertexLabel::BMinus,
                class: CycleClass::C0,
            });
            // b_m sits at index m+1; odd m covers a bounded component (C1)
            for m in 1..=(size - 2) {
                let class = if m % 2 == 1 {
                    CycleClass::C1
                } else {
                    CycleClass::C0
                };
                vertices.push(Vertex {
                    label: VertexLabel::B(m),
                    class,
                });
            }
            edges.push((2, 0));
            edges.push((2, 1));
            // path edges, oriented from the C1 endpoint
            for (idx, v) in vertices.iter().enumerate().take(size - 1).skip(2) {
                let (t, h) = if v.class == CycleClass::C1 {
                    (idx, idx + 1)
                } else {
                    (idx + 1, idx)
                };
                edges.push((t, h));
            }
        }
    }
    edges.sort_unstable();
    Ok(QuiverSpec {
        kind,
        vertices,
        edges,
    })
}

/// Size-l truncation of the half-infinite quiver of the family.
pub fn build_quiver(family: Family, size: usize) -> Result<QuiverSpec> {
    build(QuiverKind::Truncated(family), size)
}

/// Classical finite diagram of the family; same structure, finite intent tag.
pub fn finite_quiver(family: Family, size: usize) -> Result<QuiverSpec> {
    build(QuiverKind::Finite(family), size)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a4_is_the_alternating_path() {
        let q = build_quiver(Family::A, 4).unwrap();
        let classes: Vec<_> = q.vertices.iter().map(|v| v.class).collect();
        assert_eq!(
            classes,
            [
                CycleClass::C1,
                CycleClass::C0,
                CycleClass::C1,
                CycleClass::C0
            ]
        );
        assert_eq!(q.edges, [(0, 1), (2, 1), (2, 3)]);
    }

    #[test]
    fn a1_single_vertex_no_edges() {
        let q = build_quiver(Family::A, 1).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q.class(0), CycleClass::C1);
        assert!(q.edges.is_empty());
    }

    #[test]
    fn d4_is_the_star() {
        let q = build_quiver(Family::D, 4).unwrap();
        let labels: Vec<String> = q.vertices.iter().map(|v| v.label.to_string()).collect();
        assert_eq!(labels, ["b0+", "b0-", "b1", "b2"]);
        assert_eq!(q.edges, [(2, 0), (2, 1), (2, 3)]);
        assert_eq!(q.degree(2), 3);
        assert_eq!(q.class(2), CycleClass::C1);
    }

    #[test]
    fn d_below_minimum_rejected() {
        assert!(build_quiver(Family::D, 3).is_err());
        assert!(build_quiver(Family::D, 0).is_err());
    }

    #[test]
    fn edges_are_bipartite_c1_to_c0() {
        for (family, sizes) in [(Family::A, 1..40), (Family::D, 4..40)] {
            for l in sizes {
                let q = build_quiver(family, l).unwrap();
                for &(t, h) in &q.edges {
                    assert_eq!(q.class(t), CycleClass::C1);
                    assert_eq!(q.class(h), CycleClass::C0);
                }
            }
        }
    }

    #[test]
    fn truncation_coherence() {
        for (family, lo) in [(Family::A, 1), (Family::D, 4)] {
            for l in lo..30 {
                let small = build_quiver(family, l).unwrap();
                let big = build_quiver(family, l + 1).unwrap();
                assert_eq!(big.truncate(l), small);
            }
        }
    }

    #[test]
    fn d_has_exactly_one_branch_vertex() {
        for l in 5..40 {
            let q = build_quiver(Family::D, l).unwrap();
            let branch: Vec<usize> = (0..l).filter(|&i| q.degree(i) == 3).collect();
            assert_eq!(branch, [2]);
            assert_eq!(q.class(2), CycleClass::C1);
            assert!((0..l).all(|i| q.degree(i) <= 3));
        }
    }

    #[test]
    fn class_counts() {
        let q = build_quiver(Family::A, 7).unwrap();
        assert_eq!(q.class_indices(CycleClass::C1).len(), 4);
        assert_eq!(q.class_indices(CycleClass::C0).len(), 3);
        let q = build_quiver(Family::D, 8).unwrap();
        assert_eq!(q.class_indices(CycleClass::C0), [0, 1, 3, 5, 7]);
        assert_eq!(q.class_indices(CycleClass::C1), [2, 4, 6]);
    }

    #[test]
    fn finite_tag_keeps_structure() {
        let t = build_quiver(Family::D, 6).unwrap();
        let f = finite_quiver(Family::D, 6).unwrap();
        assert_eq!(t.vertices, f.vertices);
        assert_eq!(t.edges, f.edges);
        assert_ne!(t.kind, f.kind);
    }
}
