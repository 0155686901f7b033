//! Finite trees of sequences and their derivation rank.
//!
//! A tree is a finite, prefix-closed set of label sequences. The derivative
//! drops every node with no extension; the rank is the number of derivations
//! until nothing is left. JSON form: a list of integer sequences, e.g.
//! `[[],[1],[1,2]]`.

use crate::ordinal::OrdinalCNF;
use crate::schreier::{schreier_enumerate, SchreierError};
use std::collections::BTreeSet;
use thiserror::Error;

/// A finite prefix-closed set of sequences over integer labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinTree {
    nodes: BTreeSet<Vec<i64>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("PARSE_ERROR: tree is not prefix-closed, missing prefix of {0:?}")]
    NotPrefixClosed(Vec<i64>),
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
}

impl FinTree {
    pub fn empty() -> Self {
        FinTree::default()
    }

    /// Validates prefix closure: every proper prefix of a node is a node
    /// (hence the empty sequence belongs whenever the tree is nonempty).
    pub fn new(nodes: impl IntoIterator<Item = Vec<i64>>) -> Result<Self, TreeError> {
        let nodes: BTreeSet<Vec<i64>> = nodes.into_iter().collect();
        for node in &nodes {
            for cut in 0..node.len() {
                if !nodes.contains(&node[..cut]) {
                    return Err(TreeError::NotPrefixClosed(node.clone()));
                }
            }
        }
        Ok(FinTree { nodes })
    }

    pub fn nodes(&self) -> &BTreeSet<Vec<i64>> {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Keeps exactly the nodes with an extension in the tree; equivalently,
    /// the parents of nonempty nodes. Preserves prefix closure.
    pub fn derivative(&self) -> FinTree {
        let nodes: BTreeSet<Vec<i64>> = self
            .nodes
            .iter()
            .filter(|node| !node.is_empty())
            .map(|node| node[..node.len() - 1].to_vec())
            .collect();
        FinTree { nodes }
    }

    /// Smallest `r` with the `r`-th derivative empty. The empty tree has
    /// rank 0; the one-node tree rank 1; a perfect depth-`d` tree `d + 1`.
    pub fn rank(&self) -> u64 {
        let mut current = self.clone();
        let mut r = 0;
        while !current.is_empty() {
            current = current.derivative();
            r += 1;
        }
        r
    }

    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let nodes: Vec<Vec<i64>> =
            serde_json::from_str(text).map_err(|e| TreeError::Parse(e.to_string()))?;
        FinTree::new(nodes)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.nodes.iter().collect::<Vec<_>>())
            .expect("tree serialization cannot fail")
    }
}

/// The tree of increasing enumerations of `S_alpha` members with entries in
/// `{1..n}`: a sequence is a node exactly when its underlying set belongs to
/// the family. Initial segments of members are members, so this is a tree.
pub fn schreier_tree(alpha: &OrdinalCNF, n: u32, limit: usize) -> Result<FinTree, SchreierError> {
    let members = schreier_enumerate(alpha, n, limit)?;
    let nodes = members
        .iter()
        .map(|a| a.iter().map(i64::from).collect::<Vec<i64>>());
    Ok(FinTree::new(nodes).expect("initial segments of family members are members"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> OrdinalCNF {
        OrdinalCNF::parse(s).unwrap().0
    }

    #[test]
    fn constructor_validates_prefix_closure() {
        assert!(FinTree::new(vec![vec![], vec![1], vec![1, 2]]).is_ok());
        assert_eq!(
            FinTree::new(vec![vec![], vec![1, 2]]),
            Err(TreeError::NotPrefixClosed(vec![1, 2]))
        );
        assert_eq!(
            FinTree::new(vec![vec![3]]),
            Err(TreeError::NotPrefixClosed(vec![3]))
        );
        assert!(FinTree::new(Vec::<Vec<i64>>::new()).is_ok());
    }

    #[test]
    fn rank_of_small_trees() {
        assert_eq!(FinTree::empty().rank(), 0);
        assert_eq!(FinTree::new(vec![vec![]]).unwrap().rank(), 1);
        assert_eq!(
            FinTree::new(vec![vec![], vec![1], vec![2]]).unwrap().rank(),
            2
        );
    }

    #[test]
    fn rank_of_perfect_binary_trees() {
        for depth in 0..5u32 {
            let mut nodes: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..depth {
                let leaves: Vec<Vec<i64>> = nodes
                    .iter()
                    .filter(|n| n.len() == nodes.iter().map(Vec::len).max().unwrap())
                    .cloned()
                    .collect();
                for leaf in leaves {
                    for b in [0, 1] {
                        let mut child = leaf.clone();
                        child.push(b);
                        nodes.push(child);
                    }
                }
            }
            let tree = FinTree::new(nodes).unwrap();
            assert_eq!(tree.rank(), u64::from(depth) + 1);
        }
    }

    #[test]
    fn derivative_drops_leaves_only() {
        let t = FinTree::new(vec![vec![], vec![1], vec![1, 2], vec![3]]).unwrap();
        let d = t.derivative();
        assert_eq!(
            d.nodes().iter().cloned().collect::<Vec<_>>(),
            vec![vec![], vec![1]]
        );
    }

    #[test]
    fn schreier_trees_at_low_levels() {
        // Level 0: root plus childless singletons, two derivations.
        for n in [1, 3, 6] {
            assert_eq!(schreier_tree(&ord("0"), n, 10_000).unwrap().rank(), 2);
        }
        let t = schreier_tree(&ord("1"), 2, 10_000).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.rank(), 2);
        // {2,3} gives the level-1 tree a depth-2 branch.
        let t = schreier_tree(&ord("1"), 3, 10_000).unwrap();
        assert!(t.nodes().contains(&vec![2, 3]));
        assert_eq!(t.rank(), 3);
    }

    #[test]
    fn json_round_trip() {
        let t = FinTree::new(vec![vec![], vec![1], vec![1, 2], vec![3]]).unwrap();
        let text = t.to_json();
        assert_eq!(FinTree::from_json(&text).unwrap(), t);
        assert!(FinTree::from_json("[[1,2]]").is_err());
        assert!(FinTree::from_json("not json").is_err());
    }
}
