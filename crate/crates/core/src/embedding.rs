//! Induced embeddings into strong products and their checker.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{product_adjacent, LoopGraph, ProductVertex};

/// Map `V(G) → V(left ⊠ right)`; `image[x]` is the image of vertex `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEmbedding {
    pub left: LoopGraph,
    pub right: LoopGraph,
    pub image: Vec<ProductVertex>,
}

impl ProductEmbedding {
    pub fn new(left: LoopGraph, right: LoopGraph, image: Vec<ProductVertex>) -> Self {
        ProductEmbedding { left, right, image }
    }

    /// Restriction to the first `n` vertices.
    pub fn truncate(&self, n: usize) -> ProductEmbedding {
        ProductEmbedding {
            left: self.left.clone(),
            right: self.right.clone(),
            image: self.image[..n.min(self.image.len())].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingVerdict {
    Accept,
    WrongLength {
        expected: usize,
        got: usize,
    },
    OutOfRange {
        x: usize,
    },
    NotInjective {
        x: usize,
        y: usize,
    },
    /// `xy ∈ E(G)` but the images are not adjacent.
    MissingEdge {
        x: usize,
        y: usize,
    },
    /// Images adjacent although `xy ∉ E(G)`.
    ExtraEdge {
        x: usize,
        y: usize,
    },
}

impl EmbeddingVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, EmbeddingVerdict::Accept)
    }
}

impl fmt::Display for EmbeddingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EmbeddingVerdict::Accept => write!(f, "ACCEPT"),
            EmbeddingVerdict::WrongLength { expected, got } => {
                write!(f, "REJECT map covers {got} vertices, graph has {expected}")
            }
            EmbeddingVerdict::OutOfRange { x } => {
                write!(f, "REJECT image of {x} outside the product")
            }
            EmbeddingVerdict::NotInjective { x, y } => {
                write!(f, "REJECT {x} and {y} share an image")
            }
            EmbeddingVerdict::MissingEdge { x, y } => {
                write!(f, "REJECT edge {x}-{y} not present between images")
            }
            EmbeddingVerdict::ExtraEdge { x, y } => {
                write!(f, "REJECT images of non-adjacent {x},{y} are adjacent")
            }
        }
    }
}

/// Checks that `emb` is injective and that `x ~ y` in `g` exactly when the
/// images are adjacent in `left ⊠ right`.  Product adjacency is evaluated
/// on demand, the product itself is never built.
pub fn check_induced_embedding(g: &LoopGraph, emb: &ProductEmbedding) -> EmbeddingVerdict {
    let n = g.vertex_count();
    if emb.image.len() != n {
        return EmbeddingVerdict::WrongLength {
            expected: n,
            got: emb.image.len(),
        };
    }
    let (na, nb) = (emb.left.vertex_count(), emb.right.vertex_count());
    if let Some(x) = emb.image.iter().position(|p| p.a >= na || p.b >= nb) {
        return EmbeddingVerdict::OutOfRange { x };
    }
    let mut sorted: Vec<(ProductVertex, usize)> = emb.image.iter().copied().zip(0..n).collect();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            let (x, y) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
            return EmbeddingVerdict::NotInjective { x, y };
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let in_g = g.has_edge(x, y);
            let in_p = product_adjacent(&emb.left, &emb.right, emb.image[x], emb.image[y]);
            if in_g && !in_p {
                return EmbeddingVerdict::MissingEdge { x, y };
            }
            if in_p && !in_g {
                return EmbeddingVerdict::ExtraEdge { x, y };
            }
        }
    }
    EmbeddingVerdict::Accept
}
