//! Minimum-degree fill-reducing ordering on the pattern of A + Aᵀ.

use std::collections::BTreeSet;

use crate::sparse::ComplexSparseMatrix;

/// Elimination order (`order[k]` = index eliminated at step k).
///
/// Exact minimum degree on the explicit elimination graph, ties broken by the
/// lowest index, so the result is deterministic.
pub fn minimum_degree(a: &ComplexSparseMatrix) -> Vec<usize> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "ordering needs a square matrix");
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, c, _) in a.iter() {
        if r != c {
            adj[r].push(c);
            adj[c].push(r);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (adj[v].len(), v)).collect();
    let mut eliminated = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut merged = Vec::new();
    while let Some((_, v)) = queue.pop_first() {
        eliminated[v] = true;
        order.push(v);
        let clique = std::mem::take(&mut adj[v]);
        for &u in &clique {
            queue.remove(&(adj[u].len(), u));
            merge_excluding(&adj[u], &clique, u, v, &mut merged);
            std::mem::swap(&mut adj[u], &mut merged);
            queue.insert((adj[u].len(), u));
        }
    }
    debug_assert!(eliminated.iter().all(|&e| e));
    order
}

/// `out = (a ∪ b) \ {skip_a, skip_b}` for sorted inputs.
fn merge_excluding(a: &[usize], b: &[usize], skip_a: usize, skip_b: usize, out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if next != skip_a && next != skip_b {
            out.push(next);
        }
    }
}
