//! Explicitly linked strict binary trees with direct navigation.

/// One node. Children are either both present (internal) or both absent (leaf).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Node {
    pub parent: Option<usize>,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// A tree whose node ids are their preorder positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkedTree {
    pub nodes: Vec<Node>,
}

impl LinkedTree {
    /// Builds the tree from a complete preorder flag string (`true` = internal).
    /// Returns `None` if the string is not a strict tree.
    pub fn from_preorder(flags: &[bool]) -> Option<Self> {
        let mut nodes: Vec<Node> = Vec::with_capacity(flags.len());
        // internal nodes still waiting for their right child
        let mut open: Vec<usize> = Vec::new();
        for (pos, &internal) in flags.iter().enumerate() {
            let mut node = Node::default();
            if pos > 0 {
                let prev = pos - 1;
                let parent = if flags[prev] {
                    nodes[prev].left = Some(pos);
                    prev
                } else {
                    let p = open.pop()?;
                    nodes[p].right = Some(pos);
                    p
                };
                node.parent = Some(parent);
            }
            nodes.push(node);
            if internal {
                open.push(pos);
            }
        }
        // the last internal node awaiting a right child would have been popped
        let complete = !flags.is_empty()
            && open.is_empty()
            && nodes.iter().all(|n| n.left.is_some() == n.right.is_some())
            && nodes
                .iter()
                .enumerate()
                .all(|(i, n)| flags[i] == n.left.is_some());
        complete.then_some(Self { nodes })
    }

    /// Builds a tree from left-to-right leaf depths by repeated splitting.
    pub fn from_depths(depths: &[u32]) -> Option<Self> {
        let mut flags = Vec::new();
        let mut next = 0;
        fn build(depths: &[u32], next: &mut usize, level: u32, flags: &mut Vec<bool>) -> Option<()> {
            let d = *depths.get(*next)?;
            if d == level {
                flags.push(false);
                *next += 1;
                Some(())
            } else if d > level {
                flags.push(true);
                build(depths, next, level + 1, flags)?;
                build(depths, next, level + 1, flags)
            } else {
                None
            }
        }
        build(depths, &mut next, 0, &mut flags)?;
        (next == depths.len()).then_some(())?;
        Self::from_preorder(&flags)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.nodes[v].left.is_none()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.nodes[v].parent
    }

    pub fn left_child(&self, v: usize) -> Option<usize> {
        self.nodes[v].left
    }

    pub fn right_child(&self, v: usize) -> Option<usize> {
        self.nodes[v].right
    }

    /// Subtree sizes for every node, counting the node itself.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1; self.nodes.len()];
        // children always come after their parent in preorder
        for v in (0..self.nodes.len()).rev() {
            if let Some(p) = self.nodes[v].parent {
                size[p] += size[v];
            }
        }
        size
    }

    pub fn depth(&self, mut v: usize) -> u32 {
        let mut d = 0;
        while let Some(p) = self.nodes[v].parent {
            v = p;
            d += 1;
        }
        d
    }

    /// Preorder positions of the leaves, left to right.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_depths(&self) -> Vec<u32> {
        let mut depth = vec![0u32; self.nodes.len()];
        for v in 1..self.nodes.len() {
            depth[v] = depth[self.nodes[v].parent.unwrap()] + 1;
        }
        self.leaves().into_iter().map(|v| depth[v]).collect()
    }

    pub fn preorder(&self) -> Vec<bool> {
        (0..self.nodes.len()).map(|v| !self.is_leaf(v)).collect()
    }
}
