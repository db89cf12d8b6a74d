//! Textbook P-256 oracle: affine coordinates, big-integer arithmetic,
//! double-and-add scalar multiplication. Deliberately slow and simple; used
//! only to cross-check the production curve arithmetic.

use num_bigint::BigUint;
use num_traits::{One, Zero};

fn hex(s: &str) -> BigUint {
    BigUint::parse_bytes(s.as_bytes(), 16).unwrap()
}

pub struct Curve {
    pub p: BigUint,
    pub a: BigUint,
    pub b: BigUint,
    pub n: BigUint,
    pub gx: BigUint,
    pub gy: BigUint,
}

impl Curve {
    pub fn p256() -> Curve {
        let p = hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
        Curve {
            a: &p - BigUint::from(3u32),
            b: hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b"),
            n: hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551"),
            gx: hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
            gy: hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"),
            p,
        }
    }

    pub fn generator(&self) -> Point {
        Point::Affine(self.gx.clone(), self.gy.clone())
    }

    fn inv_mod_p(&self, x: &BigUint) -> BigUint {
        // Fermat: x^(p-2) mod p.
        x.modpow(&(&self.p - BigUint::from(2u32)), &self.p)
    }

    fn sub_mod_p(&self, x: &BigUint, y: &BigUint) -> BigUint {
        ((&self.p + x) - (y % &self.p)) % &self.p
    }

    pub fn is_on_curve(&self, point: &Point) -> bool {
        match point {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let lhs = (y * y) % &self.p;
                let rhs = (x * x * x + &self.a * x + &self.b) % &self.p;
                lhs == rhs
            }
        }
    }

    pub fn add(&self, lhs: &Point, rhs: &Point) -> Point {
        match (lhs, rhs) {
            (Point::Infinity, q) => q.clone(),
            (q, Point::Infinity) => q.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                if x1 == x2 {
                    if (y1 + y2) % &self.p == BigUint::zero() {
                        return Point::Infinity;
                    }
                    return self.double_affine(x1, y1);
                }
                let lambda = (self.sub_mod_p(y2, y1)
                    * self.inv_mod_p(&self.sub_mod_p(x2, x1)))
                    % &self.p;
                self.chord(&lambda, x1, y1, x2)
            }
        }
    }

    fn double_affine(&self, x: &BigUint, y: &BigUint) -> Point {
        if y.is_zero() {
            return Point::Infinity;
        }
        let lambda = ((BigUint::from(3u32) * x * x + &self.a) % &self.p
            * self.inv_mod_p(&((BigUint::from(2u32) * y) % &self.p)))
            % &self.p;
        self.chord(&lambda, x, y, x)
    }

    fn chord(&self, lambda: &BigUint, x1: &BigUint, y1: &BigUint, x2: &BigUint) -> Point {
        let x3 = self.sub_mod_p(&((lambda * lambda) % &self.p), &((x1 + x2) % &self.p));
        let y3 = self.sub_mod_p(&((lambda * self.sub_mod_p(x1, &x3)) % &self.p), y1);
        Point::Affine(x3, y3)
    }

    pub fn scalar_mul(&self, k: &BigUint, point: &Point) -> Point {
        let mut result = Point::Infinity;
        let mut addend = point.clone();
        let mut k = k % &self.n;
        while !k.is_zero() {
            if &k & BigUint::one() == BigUint::one() {
                result = self.add(&result, &addend);
            }
            addend = self.add(&addend, &addend);
            k >>= 1;
        }
        result
    }

    /// k·G for a big-endian 32-byte scalar.
    pub fn base_mul_bytes(&self, scalar: &[u8; 32]) -> Point {
        self.scalar_mul(&BigUint::from_bytes_be(scalar), &self.generator())
    }

    /// (a + b) mod n, big-endian bytes in and out.
    pub fn scalar_add_bytes(&self, a: &[u8; 32], b: &[u8; 32]) -> [u8; 32] {
        let sum = (BigUint::from_bytes_be(a) + BigUint::from_bytes_be(b)) % &self.n;
        to_fixed(&sum)
    }

    /// SEC1 compressed encoding of a finite point.
    pub fn compress(&self, point: &Point) -> [u8; 33] {
        let Point::Affine(x, y) = point else {
            panic!("cannot compress the point at infinity");
        };
        let mut out = [0u8; 33];
        out[0] = if (y & BigUint::one()).is_zero() {
            0x02
        } else {
            0x03
        };
        out[1..].copy_from_slice(&to_fixed(x));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(BigUint, BigUint),
}

fn to_fixed(v: &BigUint) -> [u8; 32] {
    let bytes = v.to_bytes_be();
    assert!(bytes.len() <= 32);
    let mut out = [0u8; 32];
    out[32 - bytes.len()..].copy_from_slice(&bytes);
    out
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn generator_is_on_curve_and_has_order_n() {
        let curve = Curve::p256();
        let g = curve.generator();
        assert!(curve.is_on_curve(&g));
        assert_eq!(curve.scalar_mul(&curve.n.clone(), &g), Point::Infinity);
    }
}
