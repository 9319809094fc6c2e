//! Midpoint codewords by repeated doubling and a bit-by-bit trie.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::tree::LinkedTree;

/// Codeword for probability `p` whose cumulative predecessor mass is `before`.
///
/// The length is the smallest `L` with `p >= 2^(1-L)`; the bits are the first
/// `L` binary digits of `before + p/2`, generated by doubling.
pub fn naive_codeword(before: &BigRational, p: &BigRational) -> Vec<bool> {
    assert!(p > &BigRational::zero());
    let two = BigRational::from_integer(BigInt::from(2));
    let mut len = 0usize;
    let mut scale = BigRational::one();
    // scale = 2^-len; stop once p >= 2 * scale
    while p < &(&two * &scale) {
        scale /= &two;
        len += 1;
    }
    let mut s = before + p / &two;
    let mut bits = Vec::with_capacity(len);
    for _ in 0..len {
        s *= &two;
        if s >= BigRational::one() {
            bits.push(true);
            s -= BigRational::one();
        } else {
            bits.push(false);
        }
    }
    bits
}

/// Codewords for every symbol of a strictly positive distribution.
pub fn naive_codewords(p: &[BigRational]) -> Vec<Vec<bool>> {
    let mut before = BigRational::zero();
    p.iter()
        .map(|pi| {
            let w = naive_codeword(&before, pi);
            before += pi;
            w
        })
        .collect()
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    child: [Option<usize>; 2],
    leaf: bool,
}

/// Binary trie holding one node per codeword prefix.
#[derive(Clone, Debug)]
pub struct NaiveTrie {
    nodes: Vec<TrieNode>,
}

impl NaiveTrie {
    /// Inserts every codeword. Returns `None` if the set is not prefix-free.
    pub fn build(words: &[Vec<bool>]) -> Option<Self> {
        let mut nodes = vec![TrieNode::default()];
        for w in words {
            let mut v = 0;
            for &b in w {
                if nodes[v].leaf {
                    return None;
                }
                let slot = b as usize;
                v = match nodes[v].child[slot] {
                    Some(c) => c,
                    None => {
                        nodes.push(TrieNode::default());
                        let c = nodes.len() - 1;
                        nodes[v].child[slot] = Some(c);
                        c
                    }
                };
            }
            if nodes[v].leaf || nodes[v].child.iter().any(Option::is_some) {
                return None;
            }
            nodes[v].leaf = true;
        }
        Some(Self { nodes })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Removes every single-child node, returning the strict tree that remains.
    pub fn contract(&self) -> LinkedTree {
        let mut flags = Vec::new();
        let mut stack = vec![0usize];
        while let Some(mut v) = stack.pop() {
            loop {
                let kids: Vec<usize> = self.nodes[v].child.iter().flatten().copied().collect();
                match kids.as_slice() {
                    [only] => v = *only,
                    [l, r] => {
                        flags.push(true);
                        stack.push(*r);
                        stack.push(*l);
                        break;
                    }
                    _ => {
                        flags.push(false);
                        break;
                    }
                }
            }
        }
        LinkedTree::from_preorder(&flags).expect("contraction of a trie is strict")
    }
}

/// Leaf depths of the contracted midpoint trie for `p`.
pub fn naive_contracted_depths(p: &[BigRational]) -> Vec<u32> {
    let words = naive_codewords(p);
    NaiveTrie::build(&words)
        .expect("midpoint codewords are prefix-free")
        .contract()
        .leaf_depths()
}
