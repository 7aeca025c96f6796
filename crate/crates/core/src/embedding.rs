//! Time-delay embedding and Theiler-masked nearest-neighbour search.
//!
//! Row `j` of a [`DelayEmbedding`] is `[x_j, x_{j+tau}, ..., x_{j+(m-1)tau}]`.
//! The neighbour search excludes every index within `m * tau` samples of the
//! query so that temporally adjacent points never match each other.

use rayon::prelude::*;

use crate::{Error, Result};

pub const DEFAULT_EMBED_DIM: usize = 4;
pub const DEFAULT_DELAY: usize = 1;

/// Delay vectors of one chunk, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayEmbedding {
    vectors: Vec<f64>,
    m: usize,
    tau: usize,
    source_len: usize,
}

impl DelayEmbedding {
    /// Number of delay vectors `M = w - (m-1)*tau`.
    pub fn rows(&self) -> usize {
        self.vectors.len() / self.m
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn delay(&self) -> usize {
        self.tau
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// Theiler exclusion radius, `m * tau`.
    pub fn theiler(&self) -> usize {
        self.m * self.tau
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.vectors[j * self.m..(j + 1) * self.m]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.vectors
    }
}

/// Embeds `chunk` with dimension `m` and delay `tau`.
pub fn delay_embed(chunk: &[f64], m: usize, tau: usize) -> Result<DelayEmbedding> {
    if m == 0 || tau == 0 {
        return Err(Error::InvalidParameter(format!(
            "embedding needs m >= 1 and tau >= 1, got m={m}, tau={tau}"
        )));
    }
    let span = (m - 1) * tau;
    if chunk.len() < span + 1 {
        return Err(Error::EmbeddingTooShort { len: chunk.len(), m, tau });
    }
    let rows = chunk.len() - span;
    let mut vectors = Vec::with_capacity(rows * m);
    for j in 0..rows {
        vectors.extend((0..m).map(|c| chunk[j + c * tau]));
    }
    Ok(DelayEmbedding { vectors, m, tau, source_len: chunk.len() })
}

/// Nearest neighbour of every row, or `None` when the Theiler window masks
/// every candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborAssignment {
    nu: Vec<Option<usize>>,
    theiler: usize,
}

impl NeighborAssignment {
    pub fn theiler(&self) -> usize {
        self.theiler
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    pub fn get(&self, j: usize) -> Option<usize> {
        self.nu[j]
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.nu
    }

    /// Largest neighbour index over rows that have one.
    pub fn max_neighbor(&self) -> Option<usize> {
        self.nu.iter().flatten().copied().max()
    }

    pub fn assigned(&self) -> usize {
        self.nu.iter().filter(|n| n.is_some()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborBackend {
    /// Exhaustive `O(M^2)` scan; the reference the tree is checked against.
    BruteForce,
    #[default]
    KdTree,
}

impl NeighborBackend {
    pub fn name(self) -> &'static str {
        match self {
            NeighborBackend::BruteForce => "brute-force",
            NeighborBackend::KdTree => "kd-tree",
        }
    }
}

impl std::str::FromStr for NeighborBackend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "brute-force" | "brute" => Ok(NeighborBackend::BruteForce),
            "kd-tree" | "kdtree" => Ok(NeighborBackend::KdTree),
            other => Err(format!("unknown neighbour backend `{other}`")),
        }
    }
}

/// Squared Euclidean distance, accumulated in column order. Both backends go
/// through this so their results compare exactly.
#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| {
        let d = x - y;
        acc + d * d
    })
}

#[inline]
fn masked(j: usize, i: usize, theiler: usize) -> bool {
    j.abs_diff(i) <= theiler
}

#[inline]
fn better(d2: f64, i: usize, best: Option<(f64, usize)>) -> bool {
    match best {
        None => true,
        Some((bd, bi)) => d2 < bd || (d2 == bd && i < bi),
    }
}

/// Finds `argmin_{|j-j'| > m*tau} ||y_j - y_j'||` for every row, smallest
/// index winning ties.
pub fn theiler_nearest_neighbors(
    emb: &DelayEmbedding,
    backend: NeighborBackend,
) -> Result<NeighborAssignment> {
    let theiler = emb.theiler();
    let rows = emb.rows();
    let nu: Vec<Option<usize>> = match backend {
        NeighborBackend::BruteForce => (0..rows)
            .into_par_iter()
            .map(|j| brute_force_query(emb, j, theiler))
            .collect(),
        NeighborBackend::KdTree => {
            let tree = KdTree::build(emb);
            (0..rows)
                .into_par_iter()
                .map(|j| tree.query(j, theiler))
                .collect()
        }
    };
    if nu.iter().all(Option::is_none) {
        return Err(Error::AllNeighborsMasked { rows, theiler });
    }
    Ok(NeighborAssignment { nu, theiler })
}

fn brute_force_query(emb: &DelayEmbedding, j: usize, theiler: usize) -> Option<usize> {
    let q = emb.row(j);
    let mut best: Option<(f64, usize)> = None;
    for i in 0..emb.rows() {
        if masked(j, i, theiler) {
            continue;
        }
        let d2 = sq_dist(q, emb.row(i));
        if better(d2, i, best) {
            best = Some((d2, i));
        }
    }
    best.map(|(_, i)| i)
}

const LEAF_SIZE: usize = 8;

enum Node {
    Leaf { start: usize, end: usize },
    Split { dim: usize, value: f64, left: usize, right: usize },
}

struct KdTree<'a> {
    emb: &'a DelayEmbedding,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl<'a> KdTree<'a> {
    fn build(emb: &'a DelayEmbedding) -> Self {
        let mut tree = KdTree { emb, order: (0..emb.rows()).collect(), nodes: Vec::new() };
        tree.build_node(0, emb.rows());
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start, end });
        if end - start <= LEAF_SIZE {
            return id;
        }
        let emb = self.emb;
        let slice = &mut self.order[start..end];

        // split on the widest coordinate
        let mut dim = 0;
        let mut widest = 0.0;
        for c in 0..emb.dim() {
            let (lo, hi) = slice.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = emb.row(i)[c];
                (lo.min(v), hi.max(v))
            });
            if hi - lo > widest {
                widest = hi - lo;
                dim = c;
            }
        }
        if widest == 0.0 {
            return id;
        }

        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |&a, &b| {
            emb.row(a)[dim].total_cmp(&emb.row(b)[dim]).then(a.cmp(&b))
        });
        let value = emb.row(slice[mid])[dim];
        let left = self.build_node(start, start + mid);
        let right = self.build_node(start + mid, end);
        self.nodes[id] = Node::Split { dim, value, left, right };
        id
    }

    fn query(&self, j: usize, theiler: usize) -> Option<usize> {
        let q = self.emb.row(j);
        let mut best: Option<(f64, usize)> = None;
        let mut stack = vec![(0usize, 0.0f64)];
        while let Some((node, bound)) = stack.pop() {
            if let Some((bd, _)) = best {
                if bound > bd {
                    continue;
                }
            }
            match self.nodes[node] {
                Node::Leaf { start, end } => {
                    for &i in &self.order[start..end] {
                        if masked(j, i, theiler) {
                            continue;
                        }
                        let d2 = sq_dist(q, self.emb.row(i));
                        if better(d2, i, best) {
                            best = Some((d2, i));
                        }
                    }
                }
                Node::Split { dim, value, left, right } => {
                    let diff = q[dim] - value;
                    let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                    // far first so the near side is popped next
                    stack.push((far, bound.max(diff * diff)));
                    stack.push((near, bound));
                }
            }
        }
        best.map(|(_, i)| i)
    }
}
