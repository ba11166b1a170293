//! Edwards-Erdős cuts and balanced-subgraph colorings via the pseudo-boolean
//! rank bound.
//!
//! An edge `uv` labeled `≠` is satisfied by a coloring `x` when
//! `x_u ≠ x_v`, one labeled `=` when `x_u = x_v`; either way the count of
//! satisfied edges is `Σ ½(1 − s_uv x_u x_v)` with `s = +1` for `≠` and
//! `s = −1` for `=`. The incidence matrix of a connected graph has rank
//! `n − 1`, which makes the rank bound at least `m/2 + (n−1)/4`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::gf2::{self, BitMatrix, BitVector};
use crate::linsystem::{Assignment, Sign, Weight};
use crate::pseudobool::{lower_bound, FourierPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("edge {index} is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} uses vertex {vertex}, graph has {n} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {index} is labeled '=', max cut needs '!=' everywhere")]
    NotACutInstance { index: usize },
    #[error("coloring has {found} colors, graph has {expected} vertices")]
    ColoringLength { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    Equal,
    NotEqual,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeLabel::Equal => "=",
            EdgeLabel::NotEqual => "!=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: EdgeLabel,
}

impl Edge {
    pub fn is_satisfied(&self, coloring: &[Sign]) -> bool {
        let same = coloring[self.u] == coloring[self.v];
        match self.label {
            EdgeLabel::Equal => same,
            EdgeLabel::NotEqual => !same,
        }
    }
}

/// Undirected graph with `=`/`≠` edge labels. Parallel edges are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl LabeledGraph {
    /// Endpoints are normalized so that `u < v`.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, EdgeLabel)>,
    ) -> Result<Self, GraphError> {
        let mut out = Vec::new();
        for (index, (a, b, label)) in edges.into_iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= n_vertices {
                    return Err(GraphError::VertexOutOfRange {
                        index,
                        vertex,
                        n: n_vertices,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { index, vertex: a });
            }
            out.push(Edge {
                u: a.min(b),
                v: a.max(b),
                label,
            });
        }
        Ok(Self {
            n_vertices,
            edges: out,
        })
    }

    /// All edges labeled `≠`.
    pub fn cut_graph(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        Self::new(
            n_vertices,
            edges.into_iter().map(|(u, v)| (u, v, EdgeLabel::NotEqual)),
        )
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_cut_instance(&self) -> bool {
        self.edges.iter().all(|e| e.label == EdgeLabel::NotEqual)
    }

    /// Component index of every vertex, numbered by smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        component_labels(self.n_vertices, self.edges.iter().map(|e| (e.u, e.v)))
    }

    pub fn n_components(&self) -> usize {
        self.components().iter().max().map_or(0, |&c| c + 1)
    }

    pub fn satisfied_count(&self, coloring: &[Sign]) -> Result<usize, GraphError> {
        if coloring.len() != self.n_vertices {
            return Err(GraphError::ColoringLength {
                expected: self.n_vertices,
                found: coloring.len(),
            });
        }
        Ok(self.edges.iter().filter(|e| e.is_satisfied(coloring)).count())
    }

    /// Number of satisfied edges as a pseudo-boolean function of the colors.
    pub fn satisfaction_polynomial(&self) -> FourierPolynomial {
        let half = Weight::new(1.into(), 2.into());
        let mut f = FourierPolynomial::new(self.n_vertices);
        for e in &self.edges {
            f.add_constant(&half);
            let coef = match e.label {
                EdgeLabel::NotEqual => -half.clone(),
                EdgeLabel::Equal => half.clone(),
            };
            f.add_term(&[e.u, e.v], coef)
                .expect("edge endpoints are valid vertices");
        }
        f
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn component_labels(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let root = find(&mut parent, v);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        out.push(label[root]);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub coloring: Vec<Sign>,
    pub satisfied: usize,
    /// `m/2 + (n − c)/4`, summed over components.
    pub guarantee: Weight,
}

impl CutResult {
    /// `⌈guarantee⌉`.
    pub fn guaranteed_count(&self) -> usize {
        usize::try_from(self.guarantee.ceil().to_integer()).expect("guarantee is nonnegative")
    }
}

/// F2 rank of the edge-vertex incidence matrix; equals `n − #components`.
pub fn incidence_rank(g: &LabeledGraph) -> usize {
    let rows = g
        .edges
        .iter()
        .map(|e| BitVector::from_indices(g.n_vertices, [e.u, e.v]))
        .collect();
    gf2::rank(&BitMatrix::from_rows(g.n_vertices, rows).expect("endpoints are in range"))
}

/// Colors `g` to satisfy at least `m/2 + (n−1)/4` edges per connected
/// component.
///
/// Components are taken over the edges whose `=` and `≠` copies do not cancel;
/// on graphs without such opposite parallel pairs these are the ordinary
/// connected components. A cancelled pair always has exactly one satisfied
/// edge and adds `1` to `m/2` only.
pub fn balanced_subgraph_assignment(g: &LabeledGraph) -> Result<CutResult, GraphError> {
    if g.n_vertices == 0 {
        return Err(GraphError::Empty);
    }
    let f = g.satisfaction_polynomial();
    let support: Vec<(usize, usize)> = f.terms().map(|(vars, _)| (vars[0], vars[1])).collect();
    let comp = component_labels(g.n_vertices, support.iter().copied());
    let n_comp = comp.iter().max().map_or(0, |&c| c + 1);

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }
    let mut position = vec![0usize; g.n_vertices];
    for list in &members {
        for (i, &v) in list.iter().enumerate() {
            position[v] = i;
        }
    }

    let mut coloring = vec![Sign::Plus; g.n_vertices];
    for (c, list) in members.iter().enumerate() {
        if list.len() == 1 {
            continue;
        }
        let mut local = FourierPolynomial::new(list.len());
        for (vars, coef) in f.terms() {
            if comp[vars[0]] == c {
                local
                    .add_term(&[position[vars[0]], position[vars[1]]], coef.clone())
                    .expect("component-local indices");
            }
        }
        let bound = lower_bound(&local);
        debug_assert_eq!(bound.rank_used, list.len() - 1);
        for (i, &v) in list.iter().enumerate() {
            coloring[v] = bound.witness.get(i);
        }
    }

    let m = Weight::from_integer(g.n_edges().into());
    let guarantee = m / Weight::from_integer(2.into())
        + Weight::new((g.n_vertices - n_comp).into(), 4.into());
    let satisfied = g.satisfied_count(&coloring)?;
    assert!(
        Weight::from_integer(satisfied.into()) >= guarantee,
        "coloring satisfies {satisfied} edges, below the guarantee {guarantee}"
    );
    Ok(CutResult {
        coloring,
        satisfied,
        guarantee,
    })
}

/// A bipartite subgraph with at least `m/2 + (n−1)/4` edges per connected
/// component; `satisfied` counts the cut edges.
pub fn max_cut_assignment(g: &LabeledGraph) -> Result<CutResult, GraphError> {
    if let Some(index) = g.edges.iter().position(|e| e.label != EdgeLabel::NotEqual) {
        return Err(GraphError::NotACutInstance { index });
    }
    balanced_subgraph_assignment(g)
}

/// The coloring's satisfied count, recomputed from scratch.
pub fn recount(g: &LabeledGraph, coloring: &Assignment) -> Result<usize, GraphError> {
    g.satisfied_count(coloring.values())
}

/// `m/2 + (n − c)/4` over plain connected components.
pub fn edwards_erdos_guarantee(g: &LabeledGraph) -> Weight {
    let m = Weight::from_integer(g.n_edges().into());
    let c = g.n_components();
    if g.n_vertices == 0 {
        return Weight::zero();
    }
    m / Weight::from_integer(2.into()) + Weight::new((g.n_vertices - c).into(), 4.into())
}
