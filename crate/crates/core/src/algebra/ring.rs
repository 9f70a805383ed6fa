//! The three coefficient domains the eliminator runs over: machine integers
//! with overflow detection, big integers, and prime fields.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Raised by the machine-integer ring; the caller retries with big integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Ring: Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn from_bigint(&self, v: &BigInt) -> Option<Self::E>;
    fn from_i64(&self, v: i64) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_unit(&self, a: &Self::E) -> bool;
    /// `size(a) < size(b)` for the Euclidean size.
    fn smaller(&self, a: &Self::E, b: &Self::E) -> bool;
    /// A quotient `q` with `size(a - q b) < size(b)`; exact when `b` is a unit.
    fn quo(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - q b`.
    fn sub_mul(&self, a: &Self::E, q: &Self::E, b: &Self::E) -> Result<Self::E, Overflow>;
}

/// Machine integers of width `$t`; `MIN` is kept out so that negation and
/// absolute values never overflow.
macro_rules! machine_ring {
    ($name:ident, $t:ty) => {
        pub(crate) struct $name;

        impl Ring for $name {
            type E = $t;

            fn zero(&self) -> $t {
                0
            }
            fn from_bigint(&self, v: &BigInt) -> Option<$t> {
                v.to_i64().and_then(|x| self.from_i64(x))
            }
            fn from_i64(&self, v: i64) -> Option<$t> {
                <$t>::try_from(v).ok().filter(|x| *x != <$t>::MIN)
            }
            fn is_zero(&self, a: &$t) -> bool {
                *a == 0
            }
            fn is_unit(&self, a: &$t) -> bool {
                *a == 1 || *a == -1
            }
            fn smaller(&self, a: &$t, b: &$t) -> bool {
                a.unsigned_abs() < b.unsigned_abs()
            }
            fn quo(&self, a: &$t, b: &$t) -> $t {
                // round to nearest so the remainder is at most |b|/2
                let (q, r) = a.div_mod_floor(b);
                if r.unsigned_abs() as u128 * 2 > b.unsigned_abs() as u128 {
                    q + 1
                } else {
                    q
                }
            }
            fn sub_mul(&self, a: &$t, q: &$t, b: &$t) -> Result<$t, Overflow> {
                q.checked_mul(*b)
                    .and_then(|qb| a.checked_sub(qb))
                    .filter(|v| *v != <$t>::MIN)
                    .ok_or(Overflow)
            }
        }
    };
}

machine_ring!(MachineInts, i64);
machine_ring!(SmallInts, i32);

pub(crate) struct BigInts;

impl Ring for BigInts {
    type E = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_bigint(&self, v: &BigInt) -> Option<BigInt> {
        Some(v.clone())
    }
    fn from_i64(&self, v: i64) -> Option<BigInt> {
        Some(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn smaller(&self, a: &BigInt, b: &BigInt) -> bool {
        a.magnitude() < b.magnitude()
    }
    fn quo(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let (q, r) = a.div_mod_floor(b);
        if r.magnitude() * 2u32 > *b.magnitude() {
            q + 1
        } else {
            q
        }
    }
    fn sub_mul(&self, a: &BigInt, q: &BigInt, b: &BigInt) -> Result<BigInt, Overflow> {
        Ok(a - q * b)
    }
}

pub(crate) struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    fn inv(&self, a: u64) -> u64 {
        let (g, x, _) = ext_gcd(a as i128, self.p as i128);
        debug_assert_eq!(g, 1);
        x.rem_euclid(self.p as i128) as u64
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl Ring for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_bigint(&self, v: &BigInt) -> Option<u64> {
        v.mod_floor(&BigInt::from(self.p)).to_u64()
    }
    fn from_i64(&self, v: i64) -> Option<u64> {
        Some((v as i128).rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn smaller(&self, a: &u64, b: &u64) -> bool {
        *a == 0 && *b != 0
    }
    fn quo(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * self.inv(*b) as u128) % self.p as u128) as u64
    }
    fn sub_mul(&self, a: &u64, q: &u64, b: &u64) -> Result<u64, Overflow> {
        let p = self.p as u128;
        let qb = (*q as u128 * *b as u128) % p;
        Ok(((*a as u128 + p - qb) % p) as u64)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_quotients_leave_small_remainders() {
        let r = MachineInts;
        for a in -20i64..=20 {
            for b in [-7i64, -2, -1, 1, 3, 6] {
                let q = r.quo(&a, &b);
                let rem = r.sub_mul(&a, &q, &b).unwrap();
                assert!(rem.unsigned_abs() * 2 <= b.unsigned_abs(), "{a} {b}");
            }
        }
        assert_eq!(r.sub_mul(&i64::MAX, &-1, &1), Err(Overflow));
        assert_eq!(SmallInts.sub_mul(&i32::MAX, &-1, &1), Err(Overflow));
        assert_eq!(SmallInts.from_i64(1 << 40), None);
        assert_eq!(SmallInts.quo(&7, &-2), -4);
    }

    #[test]
    fn field_inverses() {
        let f = PrimeField { p: 7 };
        for a in 1..7 {
            assert_eq!(f.quo(&1, &a) * a % 7, 1);
        }
        assert_eq!(f.from_bigint(&BigInt::from(-1)), Some(6));
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
