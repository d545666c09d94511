//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's search code.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use symnorm::{Group, Perm};

pub fn p(s: &str, n: usize) -> Perm {
    Perm::from_cycles(s, n).unwrap()
}

pub fn grp(n: usize, gens: &[&str]) -> Group {
    Group::new(n, gens.iter().map(|s| p(s, n)).collect()).unwrap()
}

/// Every permutation of `0..n`, in lexicographic order of image lists.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm::from_images(cur.clone()).unwrap());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

pub fn closure(n: usize, gens: &[Perm]) -> HashSet<Perm> {
    let id = Perm::identity(n);
    let mut seen = HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

pub fn elements(g: &Group) -> HashSet<Perm> {
    closure(g.degree(), g.generators())
}

/// `|N_{S_n}(G)|` by conjugating every generator by every permutation.
pub fn brute_normaliser_order(g: &Group) -> usize {
    let els = elements(g);
    all_perms(g.degree())
        .into_iter()
        .filter(|s| g.generators().iter().all(|a| els.contains(&a.conjugate_by(s))))
        .count()
}

pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    Perm::from_images(v).unwrap()
}

pub fn random_group<R: Rng>(n: usize, gens: usize, rng: &mut R) -> Group {
    Group::new(n, (0..gens).map(|_| random_perm(n, rng)).collect()).unwrap()
}

/// All set partitions of `0..n` as label vectors (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max {
            cur.push(l);
            go(i + 1, n, max.max(l + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Partition as sorted cells, each cell sorted.
pub fn cells(labels: &[usize]) -> Vec<Vec<usize>> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); k];
    for (x, &l) in labels.iter().enumerate() {
        out[l].push(x);
    }
    out.sort();
    out
}

/// Nontrivial block systems of a transitive group by scanning all partitions.
pub fn brute_block_systems(g: &Group) -> Vec<Vec<Vec<usize>>> {
    let n = g.degree();
    let mut out: Vec<Vec<Vec<usize>>> = set_partitions(n)
        .into_iter()
        .filter(|lab| {
            let c = cells(lab);
            c.len() > 1
                && c.len() < n
                && c.iter().all(|b| b.len() == c[0].len())
                && g.generators().iter().all(|s| (0..n).all(|x| (0..n).all(|y| (lab[x] == lab[y]) == (lab[s.apply(x)] == lab[s.apply(y)]))))
        })
        .map(|lab| cells(&lab))
        .collect();
    out.sort();
    out
}

/// Common refinement of two partitions given as cells.
pub fn meet(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in a {
        for y in b {
            let c: Vec<usize> = x.iter().filter(|p| y.contains(p)).copied().collect();
            if !c.is_empty() {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

/// A small corpus of groups on at most `max_deg` points, named for messages.
pub fn small_corpus<R: Rng>(max_deg: usize, random_per_degree: usize, rng: &mut R) -> Vec<(String, Group)> {
    let mut out = vec![
        ("C4".to_string(), grp(4, &["(1,2,3,4)"])),
        ("K4".into(), grp(4, &["(1,2)(3,4)", "(1,3)(2,4)"])),
        ("C3diag".into(), grp(6, &["(1,2,3)(4,5,6)"])),
        ("C3xC3".into(), grp(6, &["(1,2,3)", "(4,5,6)"])),
        ("S3xC2".into(), grp(5, &["(1,2,3)", "(1,2)", "(4,5)"])),
        ("C2wrC2".into(), grp(4, &["(1,2)", "(1,3)(2,4)"])),
        ("C6".into(), grp(6, &["(1,2,3,4,5,6)"])),
        ("D5".into(), grp(5, &["(1,2,3,4,5)", "(2,5)(3,4)"])),
    ];
    out.retain(|(_, g)| g.degree() <= max_deg);
    for n in 2..=max_deg {
        for i in 0..random_per_degree {
            out.push((format!("rand{n}.{i}"), random_group(n, rng.gen_range(1..=2), rng)));
        }
    }
    out
}
