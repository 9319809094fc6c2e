use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use pdz::refine::ratio_bound;
use pdz::sparse::{index_width, max_heavy, rank_width};
use pdz::{
    build_query_table, compress_refined, compress_sparse, compress_t2, decode_tree, decompress_refined,
    decompress_sparse, entropy, implied_distribution, max_ratio, parse_distribution, query_refined, relative_entropy,
    smooth, Container, Method, ProbabilityDistribution, Sparsity, SuccinctTreeIndex,
};

use crate::error::{CliError, Result};
use crate::format;
use crate::MethodArg;

const DEFAULT_K: u32 = 3;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_container(path: &Path) -> Result<Container> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(Container::from_bytes(&bytes)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn compress(
    method: MethodArg,
    k: Option<u32>,
    c: Option<Sparsity>,
    epsilon: Option<BigRational>,
    input: &Path,
    output: &Path,
) -> Result<String> {
    let tree_method = matches!(method, MethodArg::Tree | MethodArg::Refine);
    if k.is_some() && method != MethodArg::Refine {
        return Err(CliError::Usage("--k applies only to --method refine".into()));
    }
    if c.is_some() && tree_method {
        return Err(CliError::Usage("--c applies only to the sparse methods".into()));
    }
    if epsilon.is_some() && !tree_method {
        return Err(CliError::Usage("--epsilon applies only to --method tree and refine".into()));
    }

    let mut p = parse_distribution(&read_text(input)?)?;
    if let Some(eps) = &epsilon {
        p = smooth(&p, eps)?;
    }
    let c = match c {
        Some(c) => c,
        None => Sparsity::integer(1)?,
    };
    let container = match method {
        MethodArg::Tree => Container::Tree(compress_t2(&p)?),
        MethodArg::Refine => Container::Refine(compress_refined(&p, k.unwrap_or(DEFAULT_K))?),
        MethodArg::Sparse => Container::Sparse(compress_sparse(&p, c)?),
        MethodArg::SparseQueryable => Container::Sparse(compress_sparse(&p, c)?).queryable(),
    };
    let bytes = container.to_bytes();
    write_file(output, &bytes)?;

    let mut out = String::new();
    writeln!(out, "method: {}", container.method().name()).unwrap();
    writeln!(out, "n: {}", container.leaf_count()).unwrap();
    writeln!(out, "payload_bits: {}", container.payload_bits().len()).unwrap();
    writeln!(out, "container_bytes: {}", bytes.len()).unwrap();
    Ok(out)
}

/// One line per symbol, in the container's natural precision.
fn render_values(container: &Container, digits: usize) -> Result<Vec<String>> {
    Ok(match container {
        Container::Tree(payload) => decode_tree(payload)?.depths().iter().map(|&d| format::dyadic(d)).collect(),
        Container::Refine(payload) => decompress_refined(payload)?.probs().map(|q| format::exact(&q)).collect(),
        Container::Sparse(payload) => decompress_sparse(payload)?
            .into_iter()
            .map(|q| format::significant(q, digits))
            .collect(),
        Container::SparseQueryable(table) => decompress_sparse(&table.to_payload())?
            .into_iter()
            .map(|q| format::significant(q, digits))
            .collect(),
    })
}

pub fn decompress(input: &Path, output: &Path, digits: usize) -> Result<String> {
    let container = read_container(input)?;
    let mut text = render_values(&container, digits)?.join("\n");
    text.push('\n');
    write_file(output, text.as_bytes())?;
    Ok(format!(
        "method: {}\nn: {}\n",
        container.method().name(),
        container.leaf_count()
    ))
}

pub fn query(input: &Path, i: u64, digits: usize) -> Result<String> {
    let container = read_container(input)?;
    let value = match &container {
        Container::Tree(payload) => {
            let index = SuccinctTreeIndex::from_payload(payload)?;
            format::exact(&index.query_prob(i as usize)?)
        }
        Container::Refine(payload) => {
            let index = SuccinctTreeIndex::from_payload(payload.base())?;
            format::exact(&query_refined(&index, payload.levels(), i as usize)?)
        }
        Container::Sparse(payload) => format::significant(build_query_table(payload).query(i)?, digits),
        Container::SparseQueryable(table) => format::significant(table.query(i)?, digits),
    };
    Ok(format!("{value}\n"))
}

fn log2_pi_squared_over_three() -> f64 {
    2.0 * std::f64::consts::PI.log2() - 3f64.log2()
}

/// Payload size the method must have, with a short formula for reports.
fn expected_bits(container: &Container) -> (u64, String) {
    let n = container.leaf_count();
    match container {
        Container::Tree(_) => (2 * n - 2, "2n-2".into()),
        Container::Refine(p) => (p.k() as u64 * n - 2, format!("kn-2, k={}", p.k())),
        Container::Sparse(p) => (p.t() * index_width(n) as u64, format!("t(floor(log2 n)+1), t={}", p.t())),
        Container::SparseQueryable(t) => (
            t.t() * (index_width(n) + rank_width(n, t.c())) as u64,
            format!("t(floor(log2 n)+floor(log2(n)/(c+1))+2), t={}", t.t()),
        ),
    }
}

enum Reconstructed {
    Exact(ProbabilityDistribution),
    Float(Vec<f64>),
}

fn reconstruct(container: &Container) -> Result<Reconstructed> {
    Ok(match container {
        Container::Tree(p) => Reconstructed::Exact(implied_distribution(&decode_tree(p)?).to_distribution()),
        Container::Refine(p) => Reconstructed::Exact(decompress_refined(p)?),
        Container::Sparse(p) => Reconstructed::Float(decompress_sparse(p)?),
        Container::SparseQueryable(t) => Reconstructed::Float(decompress_sparse(&t.to_payload())?),
    })
}

pub fn stats(original: &Path, compressed: &Path, epsilon: Option<BigRational>) -> Result<String> {
    let p = parse_distribution(&read_text(original)?)?;
    let container = read_container(compressed)?;
    let n = container.leaf_count();
    if p.len() as u64 != n {
        return Err(pdz::Error::LengthMismatch(p.len(), n as usize).into());
    }
    let h = entropy(&p);
    let eps = epsilon.unwrap_or_else(|| BigRational::from_integer(0.into()));
    let eps_f = format::rational_f64(&eps);
    let smoothing = BigRational::one() + &eps / BigRational::from_integer(BigInt::from(4));

    let mut out = String::new();
    let mut holds = true;
    writeln!(out, "method: {}", container.method().name()).unwrap();
    writeln!(out, "n: {n}").unwrap();
    writeln!(out, "entropy: {}", format::measure(h)).unwrap();

    match reconstruct(&container)? {
        Reconstructed::Exact(q) => {
            let d = relative_entropy(&p, &q)?;
            let ratio = max_ratio(&p, &q)?;
            let k = match &container {
                Container::Refine(r) => r.k(),
                _ => 2,
            };
            let ratio_limit = ratio_bound(k) * &smoothing;
            let d_limit = if k == 2 {
                2.0 + eps_f
            } else {
                format::rational_f64(&ratio_limit).log2()
            };
            holds &= d < d_limit + 1e-9 && ratio < ratio_limit;
            writeln!(out, "divergence: {} (bound < {})", format::measure(d), format::measure(d_limit)).unwrap();
            writeln!(
                out,
                "max_ratio: {} (bound < {})",
                format::measure(format::rational_f64(&ratio)),
                format::exact(&ratio_limit)
            )
            .unwrap();
            writeln!(out, "max_ratio_exact: {}", format::exact(&ratio)).unwrap();
        }
        Reconstructed::Float(q) => {
            let d = relative_entropy(&p, q.as_slice())?;
            let c = match &container {
                Container::Sparse(s) => s.c(),
                Container::SparseQueryable(t) => t.c(),
                _ => unreachable!(),
            };
            let d_limit = c.as_f64() * h + log2_pi_squared_over_three();
            holds &= d <= d_limit + 1e-6;
            let ratio = (0..p.len())
                .filter(|&i| !p.weight(i).is_zero())
                .map(|i| p.prob_f64(i) / q[i])
                .fold(0.0, f64::max);
            writeln!(
                out,
                "divergence: {} (bound <= c*H + log2(pi^2/3) = {})",
                format::measure(d),
                format::measure(d_limit)
            )
            .unwrap();
            writeln!(out, "max_ratio: {} (no bound)", format::measure(ratio)).unwrap();
            let light = q.iter().copied().fold(f64::INFINITY, f64::min);
            writeln!(out, "min_q: {}", format::measure(light)).unwrap();
            let t = match &container {
                Container::Sparse(s) => s.t(),
                Container::SparseQueryable(t) => t.t(),
                _ => unreachable!(),
            };
            let t_max = max_heavy(n, c);
            holds &= t <= t_max;
            writeln!(out, "heavy: {t} (bound <= floor(n^(1/(c+1))) = {t_max})").unwrap();
        }
    }

    let bits = container.payload_bits().len() as u64;
    let (expect, formula) = expected_bits(&container);
    holds &= bits == expect;
    writeln!(out, "payload_bits: {bits} (bound = {formula} = {expect})").unwrap();
    writeln!(out, "container_bytes: {}", container.to_bytes().len()).unwrap();
    writeln!(out, "within_bounds: {holds}").unwrap();
    Ok(out)
}

pub fn info(input: &Path) -> Result<String> {
    let container = read_container(input)?;
    let mut out = String::new();
    writeln!(out, "method: {}", container.method().name()).unwrap();
    writeln!(out, "n: {}", container.leaf_count()).unwrap();
    match &container {
        Container::Tree(_) => {}
        Container::Refine(p) => writeln!(out, "k: {}", p.k()).unwrap(),
        Container::Sparse(p) => writeln!(out, "c: {}\nt: {}", p.c(), p.t()).unwrap(),
        Container::SparseQueryable(t) => writeln!(out, "c: {}\nt: {}", t.c(), t.t()).unwrap(),
    }
    let (expect, formula) = expected_bits(&container);
    writeln!(out, "payload_bits: {} ({formula})", expect).unwrap();
    if matches!(container.method(), Method::Tree | Method::Refine) {
        let base = match &container {
            Container::Tree(p) => p.clone(),
            Container::Refine(p) => p.base().clone(),
            _ => unreachable!(),
        };
        let index = SuccinctTreeIndex::from_payload(&base)?;
        writeln!(out, "index_aux_bits: {}", index.aux_bits()).unwrap();
    }
    writeln!(out, "container_bytes: {}", container.to_bytes().len()).unwrap();
    Ok(out)
}
