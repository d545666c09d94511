//! Built-in constructors for transitive test groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::actions::wreath_product;
use crate::codes::is_prime;
use crate::error::{Error, Result};
use crate::group::{cycle, Group};
use crate::perm::Perm;

pub fn cyclic(d: usize) -> Group {
    if d < 2 {
        return Group::trivial(d);
    }
    let pts: Vec<usize> = (0..d).collect();
    Group::from_parts(d, vec![cycle(d, &pts)], Some(BigUint::from(d)))
}

/// Symmetries of the `d`-gon, order `2d` (for `d >= 3`).
pub fn dihedral(d: usize) -> Group {
    if d < 3 {
        return Group::symmetric(d);
    }
    let refl = Perm::from_images((0..d).map(|i| (d - i) % d).collect()).expect("reflection");
    let rot = cycle(d, &(0..d).collect::<Vec<_>>());
    Group::from_parts(d, vec![rot, refl], Some(BigUint::from(2 * d)))
}

/// Regular representation of `(Z/2)^k` on `2^k` points: `x -> x xor 2^i`.
pub fn elementary_regular(k: usize) -> Group {
    let d = 1usize << k;
    let gens = (0..k)
        .map(|i| Perm::from_images((0..d).map(|x| x ^ (1 << i)).collect()).expect("translation"))
        .collect();
    Group::from_parts(d, gens, Some(BigUint::from(d)))
}

/// `x -> a x + b` on `Z/pZ`.
pub fn agl1(p: usize) -> Result<Group> {
    if !is_prime(p as u64) {
        return Err(Error::Invalid(format!("agl1 needs a prime degree, got {p}")));
    }
    let trans = cycle(p, &(0..p).collect::<Vec<_>>());
    let g = (1..p)
        .find(|&g| (1..p - 1).all(|e| (0..e).fold(1, |x, _| x * g % p) != 1))
        .unwrap_or(1);
    let mult = Perm::from_images((0..p).map(|x| x * g % p).collect()).expect("unit");
    Ok(Group::from_parts(p, vec![trans, mult], Some(BigUint::from(p * (p - 1)))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cyclic,
    Dihedral,
    Symmetric,
    Alternating,
    /// Regular elementary abelian 2-group; degree 4 is the Klein group.
    KleinRegular,
    Agl1,
    /// `S_a wr S_(deg / a)`.
    Wreath(usize),
}

impl Family {
    pub fn group(self, deg: usize) -> Result<Group> {
        match self {
            Family::Cyclic => Ok(cyclic(deg)),
            Family::Dihedral => Ok(dihedral(deg)),
            Family::Symmetric => Ok(Group::symmetric(deg)),
            Family::Alternating => Ok(Group::alternating(deg)),
            Family::KleinRegular => {
                if deg < 4 || !deg.is_power_of_two() {
                    return Err(Error::Invalid(format!("klein-regular needs a power of two >= 4, got {deg}")));
                }
                Ok(elementary_regular(deg.trailing_zeros() as usize))
            }
            Family::Agl1 => agl1(deg),
            Family::Wreath(a) => {
                if a < 2 || deg % a != 0 || deg / a < 2 {
                    return Err(Error::Invalid(format!("wreath:{a} does not fit degree {deg}")));
                }
                Ok(wreath_product(&Group::symmetric(a), &Group::symmetric(deg / a)))
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Ok(match s {
            "cyclic" => Family::Cyclic,
            "dihedral" => Family::Dihedral,
            "symmetric" => Family::Symmetric,
            "alternating" => Family::Alternating,
            "klein-regular" => Family::KleinRegular,
            "agl1" => Family::Agl1,
            _ => match s.strip_prefix("wreath:").map(str::parse) {
                Some(Ok(a)) => Family::Wreath(a),
                _ => return Err(Error::Parse(format!("unknown family {s:?}"))),
            },
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic => write!(f, "cyclic"),
            Family::Dihedral => write!(f, "dihedral"),
            Family::Symmetric => write!(f, "symmetric"),
            Family::Alternating => write!(f, "alternating"),
            Family::KleinRegular => write!(f, "klein-regular"),
            Family::Agl1 => write!(f, "agl1"),
            Family::Wreath(a) => write!(f, "wreath:{a}"),
        }
    }
}
