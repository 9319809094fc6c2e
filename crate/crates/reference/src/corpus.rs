//! Random and exhaustive inputs shared by the test suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    NearUniform,
    Geometric,
    Zipf,
}

pub const SHAPES: [Shape; 3] = [Shape::NearUniform, Shape::Geometric, Shape::Zipf];

/// Positive integer weights of the given shape, optionally shuffled.
pub fn weights<R: Rng>(rng: &mut R, n: usize, shape: Shape) -> Vec<u64> {
    let mut w: Vec<u64> = match shape {
        Shape::NearUniform => (0..n).map(|_| rng.gen_range(1_000..=1_100)).collect(),
        Shape::Geometric => {
            let r: f64 = rng.gen_range(0.3..0.97);
            (0..n).map(|i| (1e15 * r.powi(i as i32)) as u64 + 1).collect()
        }
        Shape::Zipf => {
            let s: f64 = rng.gen_range(0.5..2.5);
            (0..n)
                .map(|i| (1e12 / ((i + 1) as f64).powf(s)) as u64 + 1)
                .collect()
        }
    };
    if rng.gen_bool(0.5) {
        w.shuffle(rng);
    }
    w
}

/// One corpus entry: `n` uniform in `1..=max_n`, shape chosen uniformly.
pub fn random_weights<R: Rng>(rng: &mut R, max_n: usize) -> Vec<u64> {
    let n = rng.gen_range(1..=max_n);
    let shape = *SHAPES.choose(rng).unwrap();
    weights(rng, n, shape)
}

/// `count` strictly positive weight vectors with `n <= max_n`.
pub fn positive_corpus<R: Rng>(rng: &mut R, count: usize, max_n: usize) -> Vec<Vec<u64>> {
    (0..count).map(|_| random_weights(rng, max_n)).collect()
}

/// Weight vectors in which a random fraction of entries is zero; at least one
/// entry always stays positive.
pub fn corpus_with_zeros<R: Rng>(rng: &mut R, count: usize, max_n: usize) -> Vec<Vec<u64>> {
    (0..count)
        .map(|_| {
            let mut w = random_weights(rng, max_n);
            let frac: f64 = rng.gen_range(0.0..0.9);
            for x in w.iter_mut() {
                if rng.gen_bool(frac) {
                    *x = 0;
                }
            }
            if w.iter().all(|&x| x == 0) {
                let i = rng.gen_range(0..w.len());
                w[i] = 1;
            }
            w
        })
        .collect()
}

/// Exact probabilities `w_i / sum w`.
pub fn to_rationals(w: &[u64]) -> Vec<BigRational> {
    let total: u128 = w.iter().map(|&x| x as u128).sum();
    let total = BigInt::from(total);
    w.iter()
        .map(|&x| BigRational::new(BigInt::from(x), total.clone()))
        .collect()
}

/// Text form accepted by the command-line tool: one integer weight per line.
pub fn to_text(w: &[u64]) -> String {
    let mut s = String::new();
    for x in w {
        s.push_str(&x.to_string());
        s.push('\n');
    }
    s
}

/// How a random tree chooses the size of each left subtree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Uniform,
    Balanced,
    Caterpillar,
}

/// Preorder flags of a random strict tree with `leaves` leaves.
pub fn random_tree<R: Rng>(rng: &mut R, leaves: usize, split: Split) -> Vec<bool> {
    assert!(leaves >= 1);
    let mut flags = Vec::with_capacity(2 * leaves - 1);
    let mut stack = vec![leaves];
    while let Some(s) = stack.pop() {
        if s == 1 {
            flags.push(false);
            continue;
        }
        let left = match split {
            Split::Uniform => rng.gen_range(1..s),
            Split::Balanced => s / 2,
            Split::Caterpillar => {
                if rng.gen_bool(0.5) {
                    1
                } else {
                    s - 1
                }
            }
        };
        flags.push(true);
        stack.push(s - left);
        stack.push(left);
    }
    flags
}

/// All compositions of `total` into `parts` positive integers.
pub fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if parts == 0 || (parts as u64) > total {
        return out;
    }
    let mut cur = vec![1u64; parts];
    cur[parts - 1] = total - (parts as u64 - 1);
    loop {
        out.push(cur.clone());
        // advance like an odometer on the first parts-1 entries, last absorbs the rest
        let mut i = parts - 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[parts - 1] > 1 {
                cur[i] += 1;
                cur[parts - 1] -= 1;
                break;
            }
            // reset entry i and hand its surplus back to the last slot
            cur[parts - 1] += cur[i] - 1;
            cur[i] = 1;
        }
    }
}

/// Every positive composition with denominator `<= max_exhaustive` and at most
/// `max_n` parts, followed by `samples` random compositions with denominators
/// up to `max_sampled`.
pub fn small_family<R: Rng>(
    rng: &mut R,
    max_n: usize,
    max_exhaustive: u64,
    max_sampled: u64,
    samples: usize,
) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for total in 1..=max_exhaustive {
        for parts in 1..=max_n {
            out.extend(compositions(total, parts));
        }
    }
    for _ in 0..samples {
        let total = rng.gen_range(1..=max_sampled);
        let parts = rng.gen_range(1..=max_n.min(total as usize));
        // choose parts-1 distinct cut points in 1..total
        let mut cuts: Vec<u64> = (1..total).collect();
        cuts.shuffle(rng);
        let mut cuts = cuts[..parts - 1].to_vec();
        cuts.sort_unstable();
        let mut prev = 0;
        let mut w = Vec::with_capacity(parts);
        for c in cuts {
            w.push(c - prev);
            prev = c;
        }
        w.push(total - prev);
        out.push(w);
    }
    out
}
