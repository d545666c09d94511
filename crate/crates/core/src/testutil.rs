//! Brute-force helpers shared by unit tests.

use std::collections::HashSet;

use crate::group::Group;
use crate::perm::Perm;

pub fn p(s: &str, n: usize) -> Perm {
    Perm::from_cycles(s, n).unwrap()
}

pub fn grp(n: usize, gens: &[&str]) -> Group {
    Group::new(n, gens.iter().map(|s| p(s, n)).collect()).unwrap()
}

/// Closure of a generating set by breadth-first multiplication.
pub fn brute_closure(n: usize, gens: &[Perm]) -> HashSet<Perm> {
    let mut seen: HashSet<Perm> = HashSet::new();
    let id = Perm::identity(n);
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen
}

/// Every permutation of `0..n`.
pub fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        let n = used.len();
        if cur.len() == n {
            out.push(Perm::from_images(cur.clone()).unwrap());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Brute-force symmetric normaliser order: counts all permutations that
/// conjugate the element set onto itself.
pub fn brute_normaliser_order(n: usize, gens: &[Perm]) -> usize {
    let elems = brute_closure(n, gens);
    all_perms(n)
        .into_iter()
        .filter(|s| gens.iter().all(|g| elems.contains(&g.conjugate_by(s))))
        .count()
}
