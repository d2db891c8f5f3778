//! Rooted planar trees whose internal vertices have at least two children.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn corolla(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::input(format!("corolla arity must be ≥ 2, got {k}")));
        }
        Ok(PlanarTree::Node(vec![PlanarTree::Leaf; k]))
    }

    pub fn node(children: Vec<PlanarTree>) -> Result<Self> {
        if children.len() < 2 {
            return Err(Error::input("internal vertices need at least two children"));
        }
        Ok(PlanarTree::Node(children))
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(c) => c.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(c) => 1 + c.iter().map(PlanarTree::vertices).sum::<usize>(),
        }
    }

    /// Edges joining two internal vertices.
    pub fn internal_edges(&self) -> usize {
        self.vertices().saturating_sub(1)
    }

    /// Grafts `other` onto leaf `j` (0-based, left to right).
    pub fn graft(&self, j: usize, other: &PlanarTree) -> Result<Self> {
        fn go(t: &PlanarTree, j: &mut usize, other: &PlanarTree) -> Option<PlanarTree> {
            match t {
                PlanarTree::Leaf => {
                    if *j == 0 {
                        *j = usize::MAX;
                        Some(other.clone())
                    } else {
                        *j -= 1;
                        None
                    }
                }
                PlanarTree::Node(c) => {
                    let mut out = Vec::with_capacity(c.len());
                    let mut hit = false;
                    for ch in c {
                        if hit {
                            out.push(ch.clone());
                        } else if let Some(n) = go(ch, j, other) {
                            out.push(n);
                            hit = true;
                        } else {
                            out.push(ch.clone());
                        }
                    }
                    hit.then_some(PlanarTree::Node(out))
                }
            }
        }
        let mut k = j;
        go(self, &mut k, other).ok_or_else(|| Error::input(format!("tree has no leaf {j}")))
    }

    /// A sequence `(leaf, arity)` of corolla graftings that rebuilds the tree;
    /// the first entry is the root corolla.
    pub fn grafting_steps(&self) -> Vec<(usize, usize)> {
        // Children are expanded right to left so earlier leaf positions stay put.
        fn go(t: &PlanarTree, pos: usize, steps: &mut Vec<(usize, usize)>) {
            if let PlanarTree::Node(c) = t {
                steps.push((pos, c.len()));
                for i in (0..c.len()).rev() {
                    go(&c[i], pos + i, steps);
                }
            }
        }
        let mut steps = Vec::new();
        go(self, 0, &mut steps);
        steps
    }

    pub fn from_grafting_steps(steps: &[(usize, usize)]) -> Result<Self> {
        let Some(&(_, k)) = steps.first() else {
            return Ok(PlanarTree::Leaf);
        };
        let mut t = PlanarTree::corolla(k)?;
        for &(j, a) in &steps[1..] {
            t = t.graft(j, &PlanarTree::corolla(a)?)?;
        }
        Ok(t)
    }
}

/// All trees with `n` leaves, each exactly once, in canonical order.
pub fn planar_trees(n: usize) -> Vec<PlanarTree> {
    fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 1 {
            return vec![vec![n]];
        }
        let mut out = Vec::new();
        for first in 1..=n - (parts - 1) {
            for mut rest in compositions(n - first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    if n == 1 {
        return vec![PlanarTree::Leaf];
    }
    let mut out = Vec::new();
    for k in 2..=n {
        for comp in compositions(n, k) {
            let mut partial: Vec<Vec<PlanarTree>> = vec![Vec::new()];
            for &m in &comp {
                let subs = planar_trees(m);
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        subs.iter().map(move |s| {
                            let mut q = p.clone();
                            q.push(s.clone());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial.into_iter().map(PlanarTree::Node));
        }
    }
    out.sort();
    out
}

/// Trees with `n` leaves produced by the successive-insertion grammar: start
/// from a corolla and repeatedly graft corollas onto leaves. Every writing is
/// generated; the set removes repeated trees.
pub fn trees_by_insertion(n: usize) -> Vec<PlanarTree> {
    let mut all = BTreeSet::new();
    if n == 1 {
        return vec![PlanarTree::Leaf];
    }
    let mut frontier: Vec<PlanarTree> = (2..=n).map(|k| PlanarTree::corolla(k).unwrap()).collect();
    while let Some(t) = frontier.pop() {
        let l = t.leaves();
        if l == n {
            all.insert(t);
            continue;
        }
        for j in 0..l {
            for a in 2..=n - l + 1 {
                frontier.push(t.graft(j, &PlanarTree::corolla(a).unwrap()).unwrap());
            }
        }
    }
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schroeder_counts() {
        let expected = [1, 1, 3, 11, 45, 197];
        for (n, &c) in (1..=6).zip(expected.iter()) {
            assert_eq!(planar_trees(n).len(), c, "n = {n}");
        }
    }

    #[test]
    fn insertion_grammar_agrees() {
        for n in 1..=5 {
            assert_eq!(trees_by_insertion(n), planar_trees(n));
        }
    }

    #[test]
    fn grafting_round_trip() {
        for n in 2..=5 {
            for t in planar_trees(n) {
                let steps = t.grafting_steps();
                assert_eq!(PlanarTree::from_grafting_steps(&steps).unwrap(), t);
            }
        }
    }

    #[test]
    fn arity_one_rejected() {
        assert!(PlanarTree::corolla(1).is_err());
        assert!(PlanarTree::node(vec![PlanarTree::Leaf]).is_err());
    }
}
