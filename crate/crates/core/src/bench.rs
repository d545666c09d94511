//! Benchmark harness for random subdirect products, the small-degree test
//! corpus, and the self-test runner.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::actions::{direct_product, wreath_product};
use crate::codes::{code_automorphisms, LinearCode};
use crate::driver::{normalise, symmetric_normaliser, ChainConfig, Method};
use crate::error::{Error, Result};
use crate::families::{cyclic, dihedral, elementary_regular, Family};
use crate::group::{factorial, Group};
use crate::par::{self, Exec};
use crate::perm::Perm;
use crate::search::{oracle_normaliser, SearchBudget};

/// Seed of case `index` derived from a master seed (splitmix64).
pub fn case_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `gens` random elements of `G^copies`, generating a subgroup `T`.
pub fn sample_subdirect(g: &Group, copies: usize, gens: usize, seed: u64) -> Result<Group> {
    let (p, _) = direct_product(&vec![g.clone(); copies])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems = (0..gens).map(|_| p.random_element(&mut rng)).collect();
    Group::new(p.degree(), elems)
}

#[derive(Debug, Clone, Copy)]
pub struct SubdirectSpec {
    pub family: Family,
    pub deg: usize,
    pub copies: usize,
    pub gens: usize,
    pub count: usize,
    pub seed: u64,
    pub method: Method,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchCase {
    pub family: String,
    pub deg: usize,
    pub copies: usize,
    pub gens: usize,
    pub seed: u64,
    pub degree: usize,
    pub generator_count: usize,
    pub method: String,
    pub input_order: String,
    pub normalizer_order: String,
    pub time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub cases: usize,
    pub avg_ms: f64,
    pub max_ms: f64,
    pub max_over_avg: f64,
}

impl BenchSummary {
    pub fn of(cases: &[BenchCase]) -> BenchSummary {
        let max_ms = cases.iter().map(|c| c.time_ms).fold(0.0, f64::max);
        let avg_ms = if cases.is_empty() {
            0.0
        } else {
            cases.iter().map(|c| c.time_ms).sum::<f64>() / cases.len() as f64
        };
        BenchSummary {
            cases: cases.len(),
            avg_ms,
            max_ms,
            max_over_avg: if avg_ms > 0.0 { max_ms / avg_ms } else { 0.0 },
        }
    }
}

/// Checks the divisibility and containment facts every result must obey.
fn check_result(t: &Group, n: &Group) -> Result<()> {
    let (to, no) = (t.order(), n.order());
    if !(&no % &to).is_zero() || !(factorial(t.degree()) % &no).is_zero() || !t.is_subgroup_of(n) {
        return Err(Error::ChainViolation(format!("normaliser order {no} inconsistent with input order {to}")));
    }
    Ok(())
}

pub fn run_case(spec: &SubdirectSpec, index: usize, cfg: &ChainConfig) -> Result<BenchCase> {
    let seed = case_seed(spec.seed, index as u64);
    let g = spec.family.group(spec.deg)?;
    let t = sample_subdirect(&g, spec.copies, spec.gens, seed)?;
    let cfg = ChainConfig { seed, ..*cfg };
    let start = Instant::now();
    let (n, _) = normalise(&t, spec.method, &cfg)?;
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    check_result(&t, &n)?;
    Ok(BenchCase {
        family: spec.family.to_string(),
        deg: spec.deg,
        copies: spec.copies,
        gens: spec.gens,
        seed,
        degree: t.degree(),
        generator_count: t.generators().len(),
        method: spec.method.to_string(),
        input_order: t.order().to_string(),
        normalizer_order: n.order().to_string(),
        time_ms,
    })
}

/// Runs every case; output is in case order whatever the execution mode.
pub fn run_subdirect(spec: &SubdirectSpec, cfg: &ChainConfig, exec: Exec) -> Result<Vec<BenchCase>> {
    par::map_range(exec, spec.count, |i| run_case(spec, i, cfg))
        .into_iter()
        .collect()
}

/// Named small groups of degree 2 to 8 plus random subgroups of `S_n`.
pub fn oracle_corpus(seed: u64) -> Vec<(String, Group)> {
    let mut out: Vec<(String, Group)> = Vec::new();
    for d in 2..=8 {
        out.push((format!("C{d}"), cyclic(d)));
        if d >= 4 {
            out.push((format!("D{d}"), dihedral(d)));
            out.push((format!("A{d}"), Group::alternating(d)));
        }
    }
    out.push(("S5".into(), Group::symmetric(5)));
    out.push(("K4".into(), elementary_regular(2)));
    out.push(("E8".into(), elementary_regular(3)));
    let prods: Vec<(&str, Vec<Group>)> = vec![
        ("C2xC2", vec![cyclic(2), cyclic(2)]),
        ("C2xC3", vec![cyclic(2), cyclic(3)]),
        ("C3xC3", vec![cyclic(3), cyclic(3)]),
        ("S3xC2", vec![Group::symmetric(3), cyclic(2)]),
        ("C2xC4", vec![cyclic(2), cyclic(4)]),
        ("C4xC4", vec![cyclic(4), cyclic(4)]),
        ("C2^3", vec![cyclic(2), cyclic(2), cyclic(2)]),
        ("C2^4", vec![cyclic(2), cyclic(2), cyclic(2), cyclic(2)]),
        ("S3xS3", vec![Group::symmetric(3), Group::symmetric(3)]),
        ("K4xC2", vec![elementary_regular(2), cyclic(2)]),
        ("K4xC4", vec![elementary_regular(2), cyclic(4)]),
        ("C3xS3xC2", vec![cyclic(3), Group::symmetric(3), cyclic(2)]),
        ("D4xC3", vec![dihedral(4), cyclic(3)]),
        ("C5xC3", vec![cyclic(5), cyclic(3)]),
        ("C3xC2xC2", vec![cyclic(3), cyclic(2), cyclic(2)]),
        ("C2xC2xC2xC2", vec![cyclic(2), Group::symmetric(2), cyclic(2), cyclic(2)]),
    ];
    for (name, fs) in prods {
        out.push((name.into(), direct_product(&fs).expect("non-empty").0));
    }
    let wreaths: Vec<(&str, Group, Group)> = vec![
        ("S2wrS2", Group::symmetric(2), Group::symmetric(2)),
        ("S2wrS3", Group::symmetric(2), Group::symmetric(3)),
        ("S3wrS2", Group::symmetric(3), Group::symmetric(2)),
        ("S2wrS4", Group::symmetric(2), Group::symmetric(4)),
        ("S4wrS2", Group::symmetric(4), Group::symmetric(2)),
        ("C3wrC2", cyclic(3), cyclic(2)),
        ("C2wrC3", cyclic(2), cyclic(3)),
        ("C2wrC4", cyclic(2), cyclic(4)),
        ("C4wrC2", cyclic(4), cyclic(2)),
        ("K4wrC2", elementary_regular(2), cyclic(2)),
    ];
    for (name, h, t) in wreaths {
        out.push((name.into(), wreath_product(&h, &t)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 2..=4 {
        for c in 0..4 {
            let code = random_binary_code(k, &mut rng);
            out.push((format!("code{k}.{c}"), binary_code_group(&code)));
        }
    }
    for n in 2..=8 {
        let sym = Group::symmetric(n);
        for i in 0..25 {
            let gens = (0..rng.gen_range(1..=3)).map(|_| sym.random_element(&mut rng)).collect();
            out.push((format!("rand{n}.{i}"), Group::new(n, gens).expect("valid generators")));
        }
    }
    out
}

/// A random binary code of length `k`, at least one-dimensional.
pub fn random_binary_code<R: Rng>(k: usize, rng: &mut R) -> LinearCode {
    loop {
        let rows: Vec<Vec<u32>> = (0..rng.gen_range(1..=k))
            .map(|_| (0..k).map(|_| rng.gen_range(0..2)).collect())
            .collect();
        let code = LinearCode::new(2, k, &rows).expect("binary vectors");
        if code.dimension() > 0 {
            return code;
        }
    }
}

/// The subgroup of `S_2^k` whose exponent vectors form `code`, with the
/// `i`-th factor moving `2i` and `2i + 1`. Coordinates outside the support
/// give fixed pairs.
pub fn binary_code_group(code: &LinearCode) -> Group {
    let k = code.length();
    let gens = code
        .basis()
        .iter()
        .map(|row| {
            let imgs = (0..2 * k).map(|x| if row[x / 2] == 1 { x ^ 1 } else { x }).collect();
            Perm::from_images(imgs).expect("product of transpositions")
        })
        .collect();
    Group::new(2 * k, gens).expect("valid generators")
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SelftestReport {
    pub corpus: usize,
    pub corpus_passed: usize,
    pub code_cases: usize,
    pub code_passed: usize,
    pub failures: Vec<String>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Chain against oracle on the corpus, and the order formula for the
/// groups of binary codes of full support.
pub fn selftest(seed: u64, exec: Exec) -> SelftestReport {
    let cfg = ChainConfig::full_chain();
    let corpus = oracle_corpus(seed);
    let results = par::map(exec, &corpus, |(name, g)| {
        let ok = match (symmetric_normaliser(g, &cfg), oracle_normaliser(g)) {
            (Ok((n, _)), Ok(o)) => n.same_group(&o),
            _ => false,
        };
        (name.clone(), ok)
    });
    let mut report = SelftestReport {
        corpus: corpus.len(),
        ..Default::default()
    };
    for (name, ok) in results {
        if ok {
            report.corpus_passed += 1;
        } else {
            report.failures.push(format!("corpus {name}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2);
    let codes: Vec<LinearCode> = (0..30)
        .map(|_| {
            let k = rng.gen_range(2..=4);
            full_support_code(k, &mut rng)
        })
        .collect();
    let results = par::map(exec, &codes, |code| {
        let g = binary_code_group(code);
        let aut = code_automorphisms(code, SearchBudget::default()).map(|a| a.order());
        match (symmetric_normaliser(&g, &cfg), aut) {
            (Ok((n, _)), Ok(a)) => n.order() == (BigUint::from(1u32) << code.length()) * a,
            _ => false,
        }
    });
    report.code_cases = codes.len();
    for (i, ok) in results.into_iter().enumerate() {
        if ok {
            report.code_passed += 1;
        } else {
            report.failures.push(format!("code case {i}"));
        }
    }
    report
}

/// A random binary code with no identically-zero coordinate, so that its
/// group is a subdirect product of `S_2^k`.
pub fn full_support_code<R: Rng>(k: usize, rng: &mut R) -> LinearCode {
    loop {
        let c = random_binary_code(k, rng);
        if (0..k).all(|i| c.basis().iter().any(|r| r[i] == 1)) {
            return c;
        }
    }
}
