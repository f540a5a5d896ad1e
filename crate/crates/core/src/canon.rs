//! Canonical byte keys for graphs up to isomorphism.
//!
//! The canonical form is computed by iterated neighbourhood refinement
//! (colour each vertex by its multiset of neighbour colours until stable)
//! followed by individualisation with full backtracking on ambiguous cells.
//! The graphs handled here are small and irregular, so the search tree stays
//! tiny; no automorphism pruning is attempted.
//!
//! Two pinning modes are supported:
//! * [`Pinning::None`]: plain isomorphism.
//! * [`Pinning::Marked`]: isomorphisms must fix the apex vertex and map the
//!   base pair onto the base pair as a set. The canonical labelling then
//!   always places the apex at position 0 and the base pair at positions
//!   1 and 2, and [`CanonicalKey::swap_flag`] records whether the first base
//!   vertex landed at position 2 (i.e. the canonical map exchanged the pair).

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pinning {
    /// No pinned labels: canonical up to arbitrary isomorphism.
    None,
    /// Apex pinned exactly; base pair pinned as a set.
    Marked { apex: usize, base: (usize, usize) },
}

/// A deterministic byte string identifying a graph up to (pinned)
/// isomorphism, plus the orientation flag for the pinned base pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    bytes: Vec<u8>,
    swap_flag: bool,
}

impl CanonicalKey {
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn swap_flag(&self) -> bool {
        self.swap_flag
    }

    pub fn hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Computes the canonical key of `g` under the given pinning.
pub fn canonical_key(g: &Graph, pinning: Pinning) -> Result<CanonicalKey, GraphError> {
    let n = g.vertex_count();
    let tag;
    let initial: Vec<Vec<usize>> = match pinning {
        Pinning::None => {
            tag = 0u8;
            if n == 0 {
                return Ok(CanonicalKey { bytes: vec![tag, 0], swap_flag: false });
            }
            vec![(0..n).collect()]
        }
        Pinning::Marked { apex, base } => {
            tag = 1u8;
            for label in [apex, base.0, base.1] {
                if label >= n {
                    return Err(GraphError::InvalidPin(label));
                }
            }
            if apex == base.0 || apex == base.1 {
                return Err(GraphError::InvalidPin(apex));
            }
            if base.0 == base.1 {
                return Err(GraphError::InvalidPin(base.0));
            }
            let rest: Vec<usize> =
                (0..n).filter(|&v| v != apex && v != base.0 && v != base.1).collect();
            let mut cells = vec![vec![apex], vec![base.0, base.1]];
            if !rest.is_empty() {
                cells.push(rest);
            }
            cells
        }
    };

    let mut search = Search { g, best: None };
    search.descend(refine(g, initial));
    let (labeling, _) = search.best.expect("search visits at least one leaf");

    let swap_flag = match pinning {
        Pinning::None => false,
        Pinning::Marked { base, .. } => labeling[base.0] == 2,
    };
    let mut bytes = Vec::with_capacity(2 + n * n / 8);
    bytes.push(tag);
    bytes.push(n as u8);
    bytes.extend_from_slice(&encode_adjacency(g, &labeling));
    Ok(CanonicalKey { bytes, swap_flag })
}

struct Search<'g> {
    g: &'g Graph,
    /// Winning leaf: position of each vertex, and the encoded adjacency.
    best: Option<(Vec<usize>, Vec<u8>)>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<Vec<usize>>) {
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let mut labeling = vec![0usize; self.g.vertex_count()];
                for (pos, cell) in cells.iter().enumerate() {
                    labeling[cell[0]] = pos;
                }
                let encoded = encode_adjacency(self.g, &labeling);
                match &self.best {
                    Some((_, b)) if *b <= encoded => {}
                    _ => self.best = Some((labeling, encoded)),
                }
            }
            Some(i) => {
                // Branch on every vertex of the first ambiguous cell.
                for k in 0..cells[i].len() {
                    let mut next = Vec::with_capacity(cells.len() + 1);
                    next.extend_from_slice(&cells[..i]);
                    next.push(vec![cells[i][k]]);
                    let mut remainder = cells[i].clone();
                    remainder.remove(k);
                    next.push(remainder);
                    next.extend_from_slice(&cells[i + 1..]);
                    self.descend(refine(self.g, next));
                }
            }
        }
    }
}

/// Equitable refinement: repeatedly split cells by the vector of neighbour
/// counts into every cell, keeping sub-cells ordered by that signature.
fn refine(g: &Graph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    loop {
        let mut cell_of = vec![0usize; n];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let ncells = cells.len();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(ncells);
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut sig = vec![0u32; ncells];
                    for u in g.neighbors(v) {
                        sig[cell_of[u]] += 1;
                    }
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut run: Vec<usize> = vec![keyed[0].1];
            for w in keyed.windows(2) {
                if w[1].0 == w[0].0 {
                    run.push(w[1].1);
                } else {
                    next.push(std::mem::replace(&mut run, vec![w[1].1]));
                }
            }
            next.push(run);
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

/// Upper-triangle adjacency bits of the relabelled graph, packed MSB-first.
fn encode_adjacency(g: &Graph, labeling: &[usize]) -> Vec<u8> {
    let n = g.vertex_count();
    let mut inverse = vec![0usize; n];
    for (v, &pos) in labeling.iter().enumerate() {
        inverse[pos] = v;
    }
    let nbits = n * (n - 1) / 2;
    let mut bytes = vec![0u8; nbits.div_ceil(8)];
    let mut bit = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if g.has_edge(inverse[i], inverse[j]) {
                bytes[bit / 8] |= 0x80 >> (bit % 8);
            }
            bit += 1;
        }
    }
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(g: &Graph) -> CanonicalKey {
        canonical_key(g, Pinning::None).unwrap()
    }

    #[test]
    fn relabelings_agree() {
        // K4 minus an edge under two labelings.
        let g1 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let g2 = Graph::new(4, [(3, 2), (3, 1), (3, 0), (2, 1), (2, 0)]).unwrap();
        assert_eq!(key(&g1), key(&g2));
    }

    #[test]
    fn non_isomorphic_differ() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_ne!(key(&k3).bytes(), key(&p3).bytes());
    }

    #[test]
    fn marked_mirror_pair_shares_key_with_opposite_swap() {
        // L and R differ exactly by exchanging the two base labels.
        let l = Graph::new(3, [(1, 2), (0, 1)]).unwrap();
        let r = Graph::new(3, [(1, 2), (0, 2)]).unwrap();
        let pin = Pinning::Marked { apex: 0, base: (1, 2) };
        let kl = canonical_key(&l, pin).unwrap();
        let kr = canonical_key(&r, pin).unwrap();
        assert_eq!(kl.bytes(), kr.bytes());
        assert_ne!(kl.swap_flag(), kr.swap_flag());
    }

    #[test]
    fn marked_and_unmarked_keys_do_not_collide() {
        let g = Graph::new(3, [(1, 2), (0, 1)]).unwrap();
        let plain = canonical_key(&g, Pinning::None).unwrap();
        let marked = canonical_key(&g, Pinning::Marked { apex: 0, base: (1, 2) }).unwrap();
        assert_ne!(plain.bytes(), marked.bytes());
    }

    #[test]
    fn invalid_pin_rejected() {
        let g = Graph::new(3, [(1, 2), (0, 1)]).unwrap();
        assert!(canonical_key(&g, Pinning::Marked { apex: 3, base: (1, 2) }).is_err());
        assert!(canonical_key(&g, Pinning::Marked { apex: 1, base: (1, 2) }).is_err());
    }

    #[test]
    fn symmetric_graphs_canonicalize() {
        // Fully symmetric inputs exercise the backtracking search.
        let k5 = Graph::new(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
        let empty = Graph::new(5, []).unwrap();
        assert_ne!(key(&k5), key(&empty));
        let c6a = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let c6b = Graph::new(6, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]).unwrap();
        let two_k3 = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(key(&c6a), key(&c6b));
        assert_ne!(key(&c6a), key(&two_k3));
    }
}
