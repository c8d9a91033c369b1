//! Lenstra's elliptic curve method on Montgomery curves modulo odd `n < 2^127`, with
//! x-only arithmetic, Suyama's parametrization and a baby-step giant-step stage 2.

use super::integer::primes_up_to;
use super::mont::{gcd, Mont};

/// Projective `x`-coordinate `X : Z`, in Montgomery form.
#[derive(Clone, Copy)]
struct Point {
    x: u128,
    z: u128,
}

struct Curve<'a> {
    mt: &'a Mont,
    /// `(A + 2) / 4 = a24n / a24d`
    a24n: u128,
    a24d: u128,
}

impl Curve<'_> {
    fn dbl(&self, p: Point) -> Point {
        let mt = self.mt;
        let s = mt.add(p.x, p.z);
        let d = mt.sub(p.x, p.z);
        let t1 = mt.mul(s, s);
        let t2 = mt.mul(d, d);
        let t3 = mt.sub(t1, t2);
        Point {
            x: mt.mul(mt.mul(t1, t2), self.a24d),
            z: mt.mul(t3, mt.add(mt.mul(t2, self.a24d), mt.mul(self.a24n, t3))),
        }
    }

    /// `p + q` given `p - q`.
    fn add(&self, p: Point, q: Point, diff: Point) -> Point {
        let mt = self.mt;
        let u = mt.mul(mt.sub(p.x, p.z), mt.add(q.x, q.z));
        let v = mt.mul(mt.add(p.x, p.z), mt.sub(q.x, q.z));
        let s = mt.add(u, v);
        let d = mt.sub(u, v);
        Point {
            x: mt.mul(diff.z, mt.mul(s, s)),
            z: mt.mul(diff.x, mt.mul(d, d)),
        }
    }

    /// `(k P, (k + 1) P)` for `k >= 1`.
    fn ladder(&self, p: Point, k: u64) -> (Point, Point) {
        let (mut r0, mut r1) = (p, self.dbl(p));
        for i in (0..63 - k.leading_zeros()).rev() {
            if (k >> i) & 1 == 1 {
                r0 = self.add(r1, r0, p);
                r1 = self.dbl(r1);
            } else {
                r1 = self.add(r1, r0, p);
                r0 = self.dbl(r0);
            }
        }
        (r0, r1)
    }
}

fn nontrivial(g: u128, n: u128) -> Option<u128> {
    (g != 1 && g != n).then_some(g)
}

const D: u64 = 210;

/// A proper divisor of the odd composite `n`, trying `curves` curves with stage 1
/// bound `b1` and stage 2 bound `100 b1`.
pub(crate) fn ecm_u128(n: u128, b1: u64, curves: u32) -> Option<u128> {
    if curves == 0 || b1 < 2 {
        return None;
    }
    let mt = Mont::new(n);
    let b2 = 100 * b1;
    let primes = primes_up_to(b2 + D);
    let mut is_prime = vec![false; (b2 + D + 1) as usize];
    for &p in &primes {
        is_prime[p as usize] = true;
    }
    let stage1: Vec<u64> = primes
        .iter()
        .take_while(|&&p| p <= b1)
        .map(|&p| {
            let mut q = p;
            while q <= b1 / p {
                q *= p;
            }
            q
        })
        .collect();
    let babies: Vec<u64> = (1..D / 2)
        .step_by(2)
        .filter(|j| gcd(u128::from(*j), u128::from(D)) == 1)
        .collect();

    for c in 0..curves {
        let sigma = mt.to_mont(6 + u128::from(c));
        let five = mt.to_mont(5);
        let u = mt.sub(mt.mul(sigma, sigma), five);
        let v = mt.add(mt.add(sigma, sigma), mt.add(sigma, sigma));
        let u3 = mt.mul(mt.mul(u, u), u);
        let vmu = mt.sub(v, u);
        let three_u = mt.add(mt.add(u, u), u);
        let sixteen = mt.to_mont(16);
        let curve = Curve {
            mt: &mt,
            a24n: mt.mul(mt.mul(mt.mul(vmu, vmu), vmu), mt.add(three_u, v)),
            a24d: mt.mul(mt.mul(sixteen, u3), v),
        };
        let g = gcd(curve.a24d, n);
        if g != 1 {
            match nontrivial(g, n) {
                Some(f) => return Some(f),
                None => continue,
            }
        }
        let mut q = Point {
            x: u3,
            z: mt.mul(mt.mul(v, v), v),
        };
        for &k in &stage1 {
            q = curve.ladder(q, k).0;
        }
        match gcd(q.z, n) {
            1 => {}
            g => match nontrivial(g, n) {
                Some(f) => return Some(f),
                None => continue,
            },
        }

        // stage 2: a prime p = m D +- j gives x(m D Q) = x(j Q) mod the hidden factor
        let mut multiples = vec![q; (D / 2) as usize + 1];
        let q2 = curve.dbl(q);
        if D / 2 >= 3 {
            multiples[3] = curve.add(q2, q, q);
        }
        let mut j = 5;
        while j < D / 2 {
            multiples[j as usize] = curve.add(multiples[j as usize - 2], q2, multiples[j as usize - 4]);
            j += 2;
        }
        let baby: Vec<(u64, Point)> = babies.iter().map(|&j| (j, multiples[j as usize])).collect();
        let giant = curve.ladder(q, D).0;
        let m0 = (b1 / D).max(1);
        let (mut gm, mut gm1) = curve.ladder(giant, m0);
        let mut acc = mt.to_mont(1);
        let mut m = m0;
        while m * D <= b2 {
            let centre = m * D;
            for (j, b) in &baby {
                if is_prime[(centre + j) as usize] || is_prime[(centre - j) as usize] {
                    let t = mt.sub(mt.mul(gm.x, b.z), mt.mul(b.x, gm.z));
                    acc = mt.mul(acc, t);
                }
            }
            let next = curve.add(gm1, giant, gm);
            gm = gm1;
            gm1 = next;
            m += 1;
            if m % 64 == 0 {
                if let g @ 2.. = gcd(acc, n) {
                    if let Some(f) = nontrivial(g, n) {
                        return Some(f);
                    }
                    break;
                }
            }
        }
        if let Some(f) = nontrivial(gcd(acc, n), n) {
            return Some(f);
        }
    }
    None
}
