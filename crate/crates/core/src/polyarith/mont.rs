//! Montgomery arithmetic modulo odd `n < 2^127`, for fast rho and ECM on mid-size cofactors.

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a0, a1) = (a & mask, a >> 64);
    let (b0, b1) = (b & mask, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

pub(crate) struct Mont {
    n: u128,
    /// `-n^{-1} mod 2^128`
    nprime: u128,
}

impl Mont {
    pub(crate) fn new(n: u128) -> Self {
        debug_assert!(n % 2 == 1 && n < 1 << 127);
        // Newton iteration doubles the correct low bits each step
        let mut inv: u128 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        Mont {
            n,
            nprime: inv.wrapping_neg(),
        }
    }

    /// `a b R^{-1} mod n` for `a, b < n`.
    pub(crate) fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        let m = lo.wrapping_mul(self.nprime);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(ml);
        let u = hi + mh + carry as u128;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    pub(crate) fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    pub(crate) fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.n - b)
        }
    }

    /// `a R mod n`, by doubling `a` 128 times.
    pub(crate) fn to_mont(&self, a: u128) -> u128 {
        let mut x = a % self.n;
        for _ in 0..128 {
            x = self.add(x, x);
        }
        x
    }

    pub(crate) fn modulus(&self) -> u128 {
        self.n
    }
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's rho on an odd composite `n < 2^127`, working in Montgomery form.
pub(crate) fn pollard_brent_u128(n: u128, iterations: u64, attempts: u32) -> Option<u128> {
    let mt = Mont::new(n);
    let m = 256u64;
    for attempt in 0..attempts {
        let c = (2 * attempt as u128 + 1) % n;
        let f = |x: u128| mt.add(mt.mul(x, x), c);
        let mut y = (2 + attempt as u128) % n;
        let (mut x, mut ys) = (y, y);
        let mut q: u128 = 1;
        let mut g: u128 = 1;
        let mut r: u64 = 1;
        let mut iters = 0u64;
        while g == 1 && iters < iterations {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mt.mul(q, x.abs_diff(y));
                }
                g = gcd(q, mt.modulus());
                k += m;
                iters += m.min(r);
            }
            r *= 2;
        }
        if g == n || g == 0 {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
    }
    None
}
