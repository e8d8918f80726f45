use std::collections::VecDeque;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use super::ExpanderError;
use crate::groups::{FinGenGroup, GroupElement, GroupKind};
use crate::metric::FiniteMetricSpace;

const UNSEEN: u32 = u32::MAX;

/// Shortest cycle length by breadth-first search from every vertex,
/// skipping the tree edge back to the parent. `None` for a forest.
///
/// A search stops once its depth can no longer beat the best cycle found
/// so far, so the cost on graphs of small girth is a ball per vertex.
pub fn girth(graph: &FiniteMetricSpace) -> Result<Option<u32>, ExpanderError> {
    if !graph.is_graph() {
        return Err(ExpanderError::NotGraph);
    }
    let n = graph.len();
    let best = AtomicU32::new(UNSEEN);
    (0..n).into_par_iter().for_each_init(
        || (vec![UNSEEN; n], vec![UNSEEN; n], Vec::new()),
        |(dist, parent, touched), root| {
            let mut queue = VecDeque::from([root]);
            dist[root] = 0;
            touched.push(root);
            'search: while let Some(u) = queue.pop_front() {
                let bound = best.load(Ordering::Relaxed);
                if bound != UNSEEN && 2 * dist[u] + 1 >= bound {
                    break;
                }
                for &w in graph.neighbors(u).expect("graph metric") {
                    let w = w as usize;
                    if dist[w] == UNSEEN {
                        dist[w] = dist[u] + 1;
                        parent[w] = u as u32;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[u] != w as u32 {
                        best.fetch_min(dist[u] + dist[w] + 1, Ordering::Relaxed);
                        continue 'search;
                    }
                }
            }
            for &x in touched.iter() {
                dist[x] = UNSEEN;
                parent[x] = UNSEEN;
            }
            touched.clear();
        },
    );
    let g = best.into_inner();
    Ok((g != UNSEEN).then_some(g))
}

/// Girth of the Cayley graph of a 2x2 matrix group mod `p` on its
/// symmetric generators, found by enumerating freely reduced words in
/// order of length until one evaluates to the identity. Works from the
/// matrices alone, without building the graph. `None` if no relator of
/// length at most `max_len` exists.
pub fn relator_girth(group: &FinGenGroup, max_len: u32) -> Result<Option<u32>, ExpanderError> {
    let GroupKind::ModularMatrix { dim: 2, modulus } = *group.kind() else {
        return Err(ExpanderError::NotGraph);
    };
    let letters: Vec<[u64; 4]> = group
        .symmetric_generators()
        .iter()
        .map(|g| match g {
            GroupElement::Matrix(m) => {
                let e = m.entries();
                [e[0], e[1], e[2], e[3]].map(|x| x.rem_euclid(modulus as i64) as u64)
            }
            _ => unreachable!("matrix group"),
        })
        .collect();
    let inverse: Vec<usize> = letters
        .iter()
        .map(|a| {
            letters
                .iter()
                .position(|b| mul(a, b, modulus) == IDENTITY)
                .expect("symmetric generating set")
        })
        .collect();
    for len in 1..=max_len {
        if search(&letters, &inverse, modulus, IDENTITY, None, len) {
            return Ok(Some(len));
        }
    }
    Ok(None)
}

const IDENTITY: [u64; 4] = [1, 0, 0, 1];

fn mul(a: &[u64; 4], b: &[u64; 4], p: u64) -> [u64; 4] {
    [
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    ]
}

/// Whether some reduced word of exactly `left` more letters, continuing
/// from `acc` after letter `last`, reaches the identity.
fn search(letters: &[[u64; 4]], inverse: &[usize], p: u64, acc: [u64; 4], last: Option<usize>, left: u32) -> bool {
    if left == 0 {
        return acc == IDENTITY && last.is_some();
    }
    (0..letters.len())
        .filter(|&j| last.is_none_or(|l| inverse[l] != j))
        .any(|j| search(letters, inverse, p, mul(&acc, &letters[j], p), Some(j), left - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expanders::{margulis_graph, margulis_group};

    #[test]
    fn cycle_girth() {
        assert_eq!(girth(&FiniteMetricSpace::cycle(10)).unwrap(), Some(10));
        assert_eq!(girth(&FiniteMetricSpace::cycle(7)).unwrap(), Some(7));
        assert_eq!(girth(&FiniteMetricSpace::complete(4)).unwrap(), Some(3));
    }

    #[test]
    fn tree_has_no_cycle() {
        assert_eq!(girth(&FiniteMetricSpace::path(6)).unwrap(), None);
    }

    #[test]
    fn bfs_matches_relators_on_small_primes() {
        for p in [3, 5, 7] {
            let bfs = girth(&margulis_graph(p).unwrap()).unwrap();
            let words = relator_girth(&margulis_group(p).unwrap(), 12).unwrap();
            assert_eq!(bfs, words, "p = {p}");
        }
        assert_eq!(girth(&margulis_graph(3).unwrap()).unwrap(), Some(3));
    }

    #[test]
    fn gamma5_girth_at_most_order_of_a() {
        assert!(girth(&margulis_graph(5).unwrap()).unwrap().unwrap() <= 5);
    }
}
