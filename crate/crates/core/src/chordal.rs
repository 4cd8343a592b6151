//! Chordality testing by maximum cardinality search and clique
//! enumeration along a perfect elimination ordering.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::elimination::EliminationOrder;
use crate::graph::{GraphError, UGraph};

/// Outcome of a chordality test together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChordalityWitness {
    /// Perfect elimination ordering over the alive vertices.
    Chordal(EliminationOrder),
    /// A chordless cycle of length at least four.
    Hole(Vec<usize>),
}

impl ChordalityWitness {
    pub fn is_chordal(&self) -> bool {
        matches!(self, ChordalityWitness::Chordal(_))
    }

    pub fn peo(&self) -> Option<&EliminationOrder> {
        match self {
            ChordalityWitness::Chordal(order) => Some(order),
            ChordalityWitness::Hole(_) => None,
        }
    }

    pub fn hole(&self) -> Option<&[usize]> {
        match self {
            ChordalityWitness::Chordal(_) => None,
            ChordalityWitness::Hole(cycle) => Some(cycle),
        }
    }
}

/// Maximum cardinality search visiting order, ties to the lowest id.
fn mcs_visit_order(g: &UGraph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = FixedBitSet::with_capacity(n);
    let mut visit = Vec::with_capacity(g.alive_count());
    for _ in 0..g.alive_count() {
        let mut pick = None;
        for v in g.alive_vertices() {
            if numbered.contains(v) {
                continue;
            }
            match pick {
                Some(p) if weight[p] >= weight[v] => {}
                _ => pick = Some(v),
            }
        }
        let v = pick.expect("unnumbered vertex remains");
        numbered.insert(v);
        visit.push(v);
        for u in g.neighbors(v) {
            if !numbered.contains(u) {
                weight[u] += 1;
            }
        }
    }
    visit
}

/// First vertex `v` whose later neighbours are not covered by its follower,
/// returned as `(v, follower, offending neighbour)`.
fn first_violation(g: &UGraph, peo: &[usize]) -> Option<(usize, usize, usize)> {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    for &v in peo {
        let follower = g
            .neighbors(v)
            .filter(|&u| pos[u] > pos[v])
            .min_by_key(|&u| pos[u]);
        let Some(p) = follower else { continue };
        for w in g.neighbors(v) {
            if w != p && pos[w] > pos[v] && !g.has_edge(p, w) {
                return Some((v, p, w));
            }
        }
    }
    None
}

/// Chordless cycle through `v` entering at `x` and leaving at `y`, if one
/// exists. `x` and `y` must be non-adjacent neighbours of `v`.
fn hole_through(g: &UGraph, v: usize, x: usize, y: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut blocked = g.neighbor_set(v).clone();
    blocked.insert(v);
    blocked.set(x, false);
    blocked.set(y, false);

    let mut prev = vec![usize::MAX; n];
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(x);
    let mut queue = VecDeque::from([x]);
    while let Some(a) = queue.pop_front() {
        for b in g.neighbors(a) {
            if seen.contains(b) || blocked.contains(b) {
                continue;
            }
            seen.insert(b);
            prev[b] = a;
            if b == y {
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.push(v);
                path.reverse();
                return Some(path);
            }
            queue.push_back(b);
        }
    }
    None
}

fn find_hole(g: &UGraph, hint: Option<(usize, usize, usize)>) -> Vec<usize> {
    if let Some((v, x, y)) = hint {
        if let Some(cycle) = hole_through(g, v, x, y) {
            return cycle;
        }
    }
    for v in g.alive_vertices() {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                if g.has_edge(x, y) {
                    continue;
                }
                if let Some(cycle) = hole_through(g, v, x, y) {
                    return cycle;
                }
            }
        }
    }
    unreachable!("non-chordal graph without a hole")
}

/// Tests chordality, returning a perfect elimination ordering or a hole.
pub fn is_chordal(g: &UGraph) -> ChordalityWitness {
    let mut peo = mcs_visit_order(g);
    peo.reverse();
    match first_violation(g, &peo) {
        None => ChordalityWitness::Chordal(EliminationOrder::from_vec_unchecked(peo)),
        Some(hint) => ChordalityWitness::Hole(find_hole(g, Some(hint))),
    }
}

/// Cheaper yes/no variant used in enumeration loops.
pub fn check_chordal(g: &UGraph) -> bool {
    let mut peo = mcs_visit_order(g);
    peo.reverse();
    first_violation(g, &peo).is_none()
}

/// Maximal cliques of a chordal graph, each sorted, listed in ascending
/// lexicographic order.
pub fn maximal_cliques_chordal(g: &UGraph) -> Result<Vec<Vec<usize>>, GraphError> {
    let mut peo = mcs_visit_order(g);
    peo.reverse();
    if first_violation(g, &peo).is_some() {
        return Err(GraphError::NotChordal);
    }
    Ok(cliques_from_peo(g, &peo))
}

pub(crate) fn cliques_from_peo(g: &UGraph, peo: &[usize]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut later = FixedBitSet::with_capacity(n);
    later.insert_range(..);
    let mut candidates: Vec<FixedBitSet> = Vec::with_capacity(peo.len());
    for &v in peo {
        later.set(v, false);
        let mut c = g.neighbor_set(v).clone();
        c.intersect_with(&later);
        c.insert(v);
        candidates.push(c);
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let dominated = candidates
            .iter()
            .enumerate()
            .any(|(j, d)| j != i && c.is_subset(d) && c != d);
        if !dominated {
            out.push(c.ones().collect());
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSet;

    fn cycle(n: usize) -> UGraph {
        UGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn assert_hole(g: &UGraph, hole: &[usize]) {
        let k = hole.len();
        assert!(k >= 4, "hole too short: {hole:?}");
        for i in 0..k {
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                assert_eq!(g.has_edge(hole[i], hole[j]), consecutive, "{hole:?}");
            }
        }
    }

    #[test]
    fn four_cycle_is_not_chordal() {
        let g = cycle(4);
        let w = is_chordal(&g);
        assert!(!w.is_chordal());
        let hole = w.hole().unwrap();
        assert_eq!(hole.len(), 4);
        assert_hole(&g, hole);
    }

    #[test]
    fn long_cycle_hole_is_chordless() {
        let g = cycle(7);
        assert_hole(&g, is_chordal(&g).hole().unwrap());
    }

    #[test]
    fn complete_graph_is_chordal_with_one_clique() {
        for n in 1..6 {
            let g = UGraph::complete(n);
            assert!(is_chordal(&g).is_chordal());
            assert_eq!(
                maximal_cliques_chordal(&g).unwrap(),
                vec![(0..n).collect::<Vec<_>>()]
            );
        }
    }

    #[test]
    fn peo_has_zero_fill() {
        let g = UGraph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let w = is_chordal(&g);
        let mut h = g.clone();
        for &v in w.peo().unwrap().as_slice() {
            assert_eq!(h.eliminate_in_place(v).unwrap(), EdgeSet::new());
        }
    }

    #[test]
    fn cliques_reject_non_chordal() {
        assert_eq!(
            maximal_cliques_chordal(&cycle(5)),
            Err(GraphError::NotChordal)
        );
    }

    #[test]
    fn empty_and_edgeless_graphs() {
        let g = UGraph::new(0);
        assert!(is_chordal(&g).is_chordal());
        assert!(maximal_cliques_chordal(&g).unwrap().is_empty());
        let g = UGraph::new(3);
        assert_eq!(
            maximal_cliques_chordal(&g).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn dead_vertices_are_ignored() {
        let mut g = cycle(4);
        g.remove_vertex(3);
        assert!(is_chordal(&g).is_chordal());
        assert_eq!(
            maximal_cliques_chordal(&g).unwrap(),
            vec![vec![0, 1], vec![1, 2]]
        );
    }
}
