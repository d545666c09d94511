//! Permutations stored as image tables.
//!
//! Points are `0..degree` in memory. Every textual form (cycle notation,
//! group files, JSON) is 1-based.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// A bijection of `{0, .., n-1}`; `images[i]` is the image of `i`.
///
/// Products apply left to right: `(a * b)(x) = b(a(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        if n == 0 {
            return Err(Error::Parse("permutation of degree 0".into()));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Parse(format!("image table is not a bijection: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// No validation; callers guarantee a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i as u32 == x)
        });
        Perm { images }
    }

    /// Parses 1-based disjoint cycle notation such as `(1,2,3)(4,5)`.
    /// `()` and the empty string are the identity.
    pub fn from_cycles(text: &str, degree: usize) -> Result<Perm> {
        if degree == 0 {
            return Err(Error::Parse("degree must be positive".into()));
        }
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let body_end = match (rest.strip_prefix('('), rest.find(')')) {
                (Some(_), Some(end)) => end,
                _ => return Err(Error::Parse(format!("malformed cycle notation: {text:?}"))),
            };
            let body = &rest[1..body_end];
            rest = &rest[body_end + 1..];
            if body.is_empty() {
                continue;
            }
            let mut cycle = Vec::new();
            for tok in body.split(',') {
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {tok:?} in {text:?}")))?;
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!("point {p} outside 1..{degree}")));
                }
                if used[p - 1] {
                    return Err(Error::Parse(format!("point {p} repeated in {text:?}")));
                }
                used[p - 1] = true;
                cycle.push(p - 1);
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Perm { images })
    }

    /// Writes `self` on `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Left-to-right product: apply `self`, then `other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self * other)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `s^-1 * self * s`: the permutation sending `s(x)` to `s(self(x))`,
    /// i.e. `self` with its points renamed by `s`.
    pub fn conjugate_by(&self, s: &Perm) -> Perm {
        let mut out = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            out[s.images[x] as usize] = s.images[y as usize];
        }
        Perm { images: out }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Non-trivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Sorted multiset of cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.apply(x);
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_type().into_iter().fold(1u64, |acc, l| acc / gcd(acc, l as u64) * l as u64)
    }

    /// Restriction to an invariant set, relabelled by ascending order of `points`.
    pub(crate) fn restrict(&self, points: &[usize], index_of: &[usize]) -> Perm {
        let imgs = points.iter().map(|&x| index_of[self.apply(x)] as u32).collect();
        Perm::from_images_unchecked(imgs)
    }

    /// Embeds into a larger degree, shifting points by `offset`.
    pub(crate) fn shifted(&self, offset: usize, total: usize) -> Perm {
        let mut imgs: Vec<u32> = (0..total as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            imgs[i + offset] = x + offset as u32;
        }
        Perm::from_images_unchecked(imgs)
    }
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm {
            images: self.images.iter().map(|&x| rhs.images[x as usize]).collect(),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::from_cycles(s, n).unwrap()
    }

    fn imgs(q: &Perm) -> Vec<usize> {
        q.images().map(|x| x + 1).collect()
    }

    #[test]
    fn cycle_parsing() {
        assert_eq!(imgs(&p("(1,2,3)", 3)), vec![2, 3, 1]);
        assert_eq!(imgs(&p("()", 4)), vec![1, 2, 3, 4]);
        assert_eq!(imgs(&p("(1,2)(3,4,5)", 5)), vec![2, 1, 4, 5, 3]);
        assert_eq!(imgs(&p(" ( 1 , 2 ) ", 2)), vec![2, 1]);
    }

    #[test]
    fn cycle_parse_errors() {
        assert!(Perm::from_cycles("(1,2)(2,3)", 3).is_err());
        assert!(Perm::from_cycles("(1,4)", 3).is_err());
        assert!(Perm::from_cycles("(1,2", 3).is_err());
        assert!(Perm::from_cycles("(1,x)", 3).is_err());
        assert!(Perm::from_cycles("(0,1)", 3).is_err());
    }

    #[test]
    fn compose_left_to_right() {
        assert!((&p("(1,2)", 3) * &p("(1,2)", 3)).is_identity());
        assert_eq!(&p("(1,2,3)", 3) * &Perm::identity(3), p("(1,2,3)", 3));
        // 1 -> 2 -> 3, 2 -> 1 -> 1, 3 -> 3 -> 2
        let c = p("(1,2)", 3).compose(&p("(2,3)", 3)).unwrap();
        assert_eq!(imgs(&c), vec![3, 1, 2]);
        assert_eq!(c, p("(1,3,2)", 3));
        assert!(p("(1,2)", 2).compose(&p("(1,2)", 3)).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(p("(1,2,3)", 3).inverse(), p("(1,3,2)", 3));
        assert!(Perm::identity(5).inverse().is_identity());
        assert_eq!(p("(1,2)(3,4)", 4).inverse(), p("(1,2)(3,4)", 4));
    }

    #[test]
    fn formatting_round_trip() {
        for s in ["()", "(1,2,3)", "(1,5)(2,4,3)"] {
            assert_eq!(p(s, 6).to_string(), s);
        }
    }

    #[test]
    fn conjugation_relabels() {
        let g = p("(1,2)", 3);
        assert_eq!(g.conjugate_by(&p("(2,3)", 3)), p("(1,3)", 3));
        let s = p("(1,2,3)", 3);
        assert_eq!(g.conjugate_by(&s), &(&s.inverse() * &g) * &s);
    }

    #[test]
    fn orders_and_powers() {
        let g = p("(1,2,3)(4,5)", 5);
        assert_eq!(g.order(), 6);
        assert!(g.pow(6).is_identity());
        assert_eq!(g.pow(2), &g * &g);
        assert_eq!(g.cycle_type(), vec![2, 3]);
    }
}
