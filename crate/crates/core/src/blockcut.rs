//! Biconnected components and the block-cut tree.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlockCutError {
    #[error("graph is not connected")]
    Disconnected,
}

/// Edge sets of the biconnected blocks (bridges are single-edge blocks).
/// Isolated vertices contribute nothing. Blocks are ordered by their smallest
/// edge; edges inside a block are sorted.
pub fn biconnected_blocks(g: &Graph) -> Vec<Vec<Edge>> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<Edge> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX || g.degree(root) == 0 {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // Frame: vertex, parent, next neighbor index.
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(v) {
                let w = g.neighbors(v)[*idx];
                *idx += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(Edge::new(v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(Edge::new(v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let pe = Edge::new(parent, v);
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks.sort();
    blocks
}

/// One maximal biconnected subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

/// Bipartite tree between blocks and cut vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<usize>,
    /// `(block index, cut vertex)` pairs.
    pub links: Vec<(usize, usize)>,
}

impl BlockCutTree {
    /// Blocks containing `v`.
    pub fn blocks_of(&self, v: usize) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.blocks[b].vertices.binary_search(&v).is_ok())
            .collect()
    }

    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.cut_vertices.binary_search(&v).is_ok()
    }

    /// When the tree is a path, returns its blocks and cut vertices in order
    /// `B1, c1, B2, ..., ck, B(k+1)` starting from the end whose block contains
    /// `start` (if given and unambiguous).
    pub fn as_path(&self, start: Option<usize>) -> Option<(Vec<usize>, Vec<usize>)> {
        let nb = self.blocks.len();
        if nb == 0 {
            return None;
        }
        if nb == 1 {
            return Some((vec![0], Vec::new()));
        }
        let mut cuts_of_block = vec![Vec::new(); nb];
        for &(b, c) in &self.links {
            cuts_of_block[b].push(c);
        }
        for &c in &self.cut_vertices {
            if self.links.iter().filter(|&&(_, x)| x == c).count() != 2 {
                return None;
            }
        }
        if cuts_of_block.iter().any(|cs| cs.len() > 2) {
            return None;
        }
        let ends: Vec<usize> = (0..nb).filter(|&b| cuts_of_block[b].len() == 1).collect();
        if ends.len() != 2 {
            return None;
        }
        let first = match start {
            Some(s) => {
                let holding: Vec<usize> = ends
                    .iter()
                    .copied()
                    .filter(|&b| self.blocks[b].vertices.binary_search(&s).is_ok())
                    .collect();
                *holding.first().unwrap_or(&ends[0])
            }
            None => ends[0],
        };
        let mut blocks = vec![first];
        let mut cuts = Vec::new();
        let mut prev_cut = usize::MAX;
        let mut cur = first;
        loop {
            let next_cut = cuts_of_block[cur].iter().copied().find(|&c| c != prev_cut);
            let Some(c) = next_cut else { break };
            let nxt = self
                .links
                .iter()
                .find(|&&(b, x)| x == c && b != cur)
                .map(|&(b, _)| b)?;
            cuts.push(c);
            blocks.push(nxt);
            prev_cut = c;
            cur = nxt;
        }
        if blocks.len() != nb {
            return None;
        }
        Some((blocks, cuts))
    }
}

/// Block-cut decomposition of a connected graph. A single vertex forms one
/// trivial block.
pub fn block_cut_tree(g: &Graph) -> Result<BlockCutTree, BlockCutError> {
    if !g.is_connected() {
        return Err(BlockCutError::Disconnected);
    }
    if g.vertex_count() == 1 {
        return Ok(BlockCutTree {
            blocks: vec![Block {
                vertices: vec![0],
                edges: Vec::new(),
            }],
            cut_vertices: Vec::new(),
            links: Vec::new(),
        });
    }
    let blocks: Vec<Block> = biconnected_blocks(g)
        .into_iter()
        .map(|edges| {
            let vertices: BTreeSet<usize> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
            Block {
                vertices: vertices.into_iter().collect(),
                edges,
            }
        })
        .collect();
    let mut count = vec![0usize; g.vertex_count()];
    for b in &blocks {
        for &v in &b.vertices {
            count[v] += 1;
        }
    }
    let cut_vertices: Vec<usize> = (0..g.vertex_count()).filter(|&v| count[v] > 1).collect();
    let mut links = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for &v in &b.vertices {
            if count[v] > 1 {
                links.push((i, v));
            }
        }
    }
    Ok(BlockCutTree {
        blocks,
        cut_vertices,
        links,
    })
}

pub fn is_biconnected(g: &Graph) -> bool {
    g.vertex_count() >= 2
        && g.is_connected()
        && biconnected_blocks(g).len() == 1
        && (0..g.vertex_count()).all(|v| g.degree(v) > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bowtie() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let t = block_cut_tree(&g).unwrap();
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(t.cut_vertices, vec![2]);
        let (blocks, cuts) = t.as_path(Some(0)).unwrap();
        assert_eq!(cuts, vec![2]);
        assert!(t.blocks[blocks[0]].vertices.contains(&0));
    }

    #[test]
    fn k4_is_one_block() {
        let t = block_cut_tree(&Graph::complete(4)).unwrap();
        assert_eq!(t.blocks.len(), 1);
        assert!(t.cut_vertices.is_empty());
        assert!(is_biconnected(&Graph::complete(4)));
    }

    #[test]
    fn path_graph() {
        let t = block_cut_tree(&Graph::path(4)).unwrap();
        assert_eq!(t.blocks.len(), 3);
        assert_eq!(t.cut_vertices, vec![1, 2]);
        let (blocks, cuts) = t.as_path(Some(3)).unwrap();
        assert_eq!(cuts, vec![2, 1]);
        assert_eq!(t.blocks[blocks[0]].edges, vec![Edge::new(2, 3)]);
    }

    #[test]
    fn star_is_not_a_path() {
        let t = block_cut_tree(&Graph::star(3)).unwrap();
        assert_eq!(t.blocks.len(), 3);
        assert!(t.as_path(None).is_none());
    }

    #[test]
    fn disconnected_is_rejected() {
        assert_eq!(
            block_cut_tree(&Graph::empty(2)),
            Err(BlockCutError::Disconnected)
        );
    }
}
