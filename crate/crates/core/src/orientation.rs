//! Acyclic orientations and their permutation encoding.
//!
//! An individual is a permutation of the nodes. The orientation it stands
//! for directs every edge from the node that appears earlier to the one that
//! appears later, so every encoded orientation is acyclic and every acyclic
//! orientation has at least one encoding (any of its topological orders).

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("representation covers {found} nodes, graph has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("crossover point {z} outside 1..{n}")]
    CrossoverPointOutOfRange { z: usize, n: usize },
    #[error("mutation point {z} outside 1..={n}")]
    MutationPointOutOfRange { z: usize, n: usize },
    #[error("arc ({0}, {1}) does not match an edge of the graph")]
    ArcNotInGraph(usize, usize),
    #[error("orientation assigns {found} arcs to a graph with {expected} edges")]
    ArcCountMismatch { expected: usize, found: usize },
}

/// A node permutation together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearRepresentation {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl LinearRepresentation {
    /// Wraps a 0-based permutation.
    pub fn new(sequence: Vec<usize>) -> Result<Self, RepresentationError> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (idx, &node) in sequence.iter().enumerate() {
            if node >= n || position[node] != usize::MAX {
                return Err(RepresentationError::NotAPermutation(n));
            }
            position[node] = idx;
        }
        Ok(LinearRepresentation { sequence, position })
    }

    /// Wraps a permutation given with 1-based node ids.
    pub fn from_one_based(sequence: &[usize]) -> Result<Self, RepresentationError> {
        let n = sequence.len();
        let zero_based = sequence
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or(RepresentationError::NotAPermutation(n))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(zero_based)
    }

    pub fn identity(n: usize) -> Self {
        LinearRepresentation {
            sequence: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Index of `node` in the sequence.
    pub fn position(&self, node: usize) -> usize {
        self.position[node]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    /// Whether `u` comes before `v`, i.e. an edge between them points `u -> v`.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.sequence.iter().map(|v| v + 1).collect()
    }

    fn from_sequence_unchecked(sequence: Vec<usize>) -> Self {
        let mut position = vec![0; sequence.len()];
        for (idx, &node) in sequence.iter().enumerate() {
            position[node] = idx;
        }
        LinearRepresentation { sequence, position }
    }
}

/// Direction of every edge of a graph, stored as `(tail, head)` in the
/// graph's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    /// Builds an orientation from explicit arcs, one per edge of `g` in any
    /// order. Cycles are not rejected here; see [`Orientation::is_acyclic`].
    pub fn from_arcs(g: &Graph, arcs: &[(usize, usize)]) -> Result<Self, RepresentationError> {
        if arcs.len() != g.edge_count() {
            return Err(RepresentationError::ArcCountMismatch {
                expected: g.edge_count(),
                found: arcs.len(),
            });
        }
        let mut slots = vec![None; g.edge_count()];
        for &(tail, head) in arcs {
            let key = (tail.min(head), tail.max(head));
            let idx = g
                .edges()
                .binary_search(&key)
                .map_err(|_| RepresentationError::ArcNotInGraph(tail, head))?;
            if slots[idx].replace((tail, head)).is_some() {
                return Err(RepresentationError::ArcNotInGraph(tail, head));
            }
        }
        Ok(Orientation {
            arcs: slots
                .into_iter()
                .map(|a| a.expect("every slot filled"))
                .collect(),
        })
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Kahn's algorithm over `node_count` nodes.
    pub fn is_acyclic(&self, node_count: usize) -> bool {
        let mut indegree = vec![0usize; node_count];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        for &(t, h) in &self.arcs {
            indegree[h] += 1;
            out[t].push(h);
        }
        let mut stack: Vec<usize> = (0..node_count).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &out[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == node_count
    }
}

/// Orientation of `g` induced by `rep`: each edge points from the earlier
/// node to the later one.
pub fn induce_orientation(
    g: &Graph,
    rep: &LinearRepresentation,
) -> Result<Orientation, RepresentationError> {
    if rep.len() != g.node_count() {
        return Err(RepresentationError::LengthMismatch {
            expected: g.node_count(),
            found: rep.len(),
        });
    }
    let arcs = g
        .edges()
        .iter()
        .map(|&(u, v)| if rep.precedes(u, v) { (u, v) } else { (v, u) })
        .collect();
    Ok(Orientation { arcs })
}

/// Uniformly random permutation of `0..n` (Fisher-Yates).
pub fn random_representation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LinearRepresentation {
    let mut sequence: Vec<usize> = (0..n).collect();
    sequence.shuffle(rng);
    LinearRepresentation::from_sequence_unchecked(sequence)
}

/// Prefix crossover at point `z` (`1 <= z < n`).
///
/// The first child keeps the first `z` entries of `first` and lists the
/// remaining nodes in the order they have in `second`; the second child is
/// built the same way with the parents swapped.
pub fn crossover(
    first: &LinearRepresentation,
    second: &LinearRepresentation,
    z: usize,
) -> Result<(LinearRepresentation, LinearRepresentation), RepresentationError> {
    let n = first.len();
    if second.len() != n {
        return Err(RepresentationError::LengthMismatch {
            expected: n,
            found: second.len(),
        });
    }
    if z == 0 || z >= n {
        return Err(RepresentationError::CrossoverPointOutOfRange { z, n });
    }
    Ok((splice(first, second, z), splice(second, first, z)))
}

fn splice(
    prefix_parent: &LinearRepresentation,
    order_parent: &LinearRepresentation,
    z: usize,
) -> LinearRepresentation {
    let mut sequence = Vec::with_capacity(prefix_parent.len());
    sequence.extend_from_slice(&prefix_parent.sequence[..z]);
    sequence.extend(
        order_parent
            .sequence
            .iter()
            .copied()
            .filter(|&v| prefix_parent.position[v] >= z),
    );
    LinearRepresentation::from_sequence_unchecked(sequence)
}

/// Make-source mutation at point `z` (`1 <= z <= n`): the node at position
/// `z` moves to the front, so every edge incident to it now points away
/// from it while all other edges keep their direction.
pub fn mutate(
    rep: &LinearRepresentation,
    z: usize,
) -> Result<LinearRepresentation, RepresentationError> {
    let n = rep.len();
    if z == 0 || z > n {
        return Err(RepresentationError::MutationPointOutOfRange { z, n });
    }
    let mut out = rep.clone();
    out.sequence[..z].rotate_right(1);
    for (idx, &node) in out.sequence[..z].iter().enumerate() {
        out.position[node] = idx;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rep(seq: &[usize]) -> LinearRepresentation {
        LinearRepresentation::from_one_based(seq).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(LinearRepresentation::new(vec![0, 0]).is_err());
        assert!(LinearRepresentation::new(vec![0, 2]).is_err());
        assert!(LinearRepresentation::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn induce_on_path() {
        let g = Graph::path(3);
        let o = induce_orientation(&g, &rep(&[1, 2, 3])).unwrap();
        assert_eq!(o.arcs(), &[(0, 1), (1, 2)]);
        let o = induce_orientation(&g, &rep(&[1, 3, 2])).unwrap();
        assert_eq!(o.arcs(), &[(0, 1), (2, 1)]);
        assert!(o.is_acyclic(3));
        assert!(matches!(
            induce_orientation(&g, &rep(&[1, 2])),
            Err(RepresentationError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn cyclic_orientation_detected() {
        let g = Graph::cycle(3);
        let o = Orientation::from_arcs(&g, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!o.is_acyclic(3));
        assert!(Orientation::from_arcs(&g, &[(0, 1), (1, 0), (2, 0)]).is_err());
    }

    #[test]
    fn crossover_examples() {
        let (a, b) = crossover(&rep(&[3, 1, 4, 2, 5]), &rep(&[3, 4, 1, 2, 5]), 2).unwrap();
        assert_eq!(a.to_one_based(), [3, 1, 4, 2, 5]);
        assert_eq!(b.to_one_based(), [3, 4, 1, 2, 5]);

        let (a, b) = crossover(&rep(&[1, 2, 3, 4]), &rep(&[4, 3, 2, 1]), 2).unwrap();
        assert_eq!(a.to_one_based(), [1, 2, 4, 3]);
        assert_eq!(b.to_one_based(), [4, 3, 1, 2]);
    }

    #[test]
    fn crossover_of_clones_is_identity() {
        let p = rep(&[2, 5, 1, 4, 3]);
        for z in 1..5 {
            let (a, b) = crossover(&p, &p, z).unwrap();
            assert_eq!(a, p);
            assert_eq!(b, p);
        }
    }

    #[test]
    fn crossover_point_range() {
        let p = rep(&[1, 2, 3]);
        assert!(crossover(&p, &p, 0).is_err());
        assert!(crossover(&p, &p, 3).is_err());
        assert!(crossover(&p, &rep(&[1, 2]), 1).is_err());
    }

    #[test]
    fn mutation_examples() {
        let g = Graph::path(3);
        let m = mutate(&rep(&[1, 2, 3]), 3).unwrap();
        assert_eq!(m.to_one_based(), [3, 1, 2]);
        assert_eq!(
            induce_orientation(&g, &m).unwrap().arcs(),
            &[(0, 1), (2, 1)]
        );

        let p = rep(&[2, 3, 1]);
        assert_eq!(mutate(&p, 1).unwrap(), p);
        assert!(mutate(&p, 0).is_err());
        assert!(mutate(&p, 4).is_err());
    }

    #[test]
    fn random_representation_is_seeded() {
        let a = random_representation(20, &mut ChaCha8Rng::seed_from_u64(7));
        let b = random_representation(20, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        assert_eq!(
            random_representation(1, &mut ChaCha8Rng::seed_from_u64(1)).sequence(),
            &[0]
        );
    }
}
