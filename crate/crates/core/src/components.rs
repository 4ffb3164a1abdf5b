use std::collections::VecDeque;

use crate::digraph::Digraph;

/// A partition of 0..n into blocks. Blocks are ordered by their smallest
/// member and each block is sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Canonicalizes arbitrary block ids.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut labels = Vec::with_capacity(raw.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &r) in raw.iter().enumerate() {
            let k = *map.entry(r).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            labels.push(k);
            blocks[k].push(i);
        }
        Partition { labels, blocks }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// Components of an undirected graph given as symmetric adjacency lists.
pub fn connected_components(adj: &[Vec<usize>]) -> Partition {
    let n = adj.len();
    let mut label = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if label[w] == usize::MAX {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(&label)
}

/// Weakly connected components of a digraph.
pub fn weak_components(g: &Digraph) -> Partition {
    connected_components(&g.symmetrized())
}
