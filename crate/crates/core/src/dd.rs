//! Minimal double-double arithmetic (~31 significant digits).
//!
//! The double sum over the figure-eight summand cancels catastrophically:
//! at N = 200 the summand magnitudes run some 2e8 times larger than the
//! result, which caps plain f64 evaluation near 1e-6 relative error. The
//! few operations that route through here keep the term magnitudes and
//! phases accurate to ~1e-30 so the cancelled sum still carries 1e-12.
//!
//! Representation: unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
//! Algorithms are the standard Dekker/Knuth error-free transforms.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    (p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// π to double-double precision.
    pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    /// Exact ratio of two integers (both must be exactly representable).
    pub fn from_ratio(p: i64, q: i64) -> Dd {
        Dd::from_f64(p as f64).div(Dd::from_f64(q as f64))
    }
}

/// sin and cos of `x` for `x` in [0, π/2), by Taylor series. About 20 terms
/// reach the 1e-33 tail at the interval's right end.
fn sincos_taylor(x: Dd) -> (Dd, Dd) {
    let x2 = x.mul(x);
    let mut sin = x;
    let mut term = x;
    let mut k = 1.0f64;
    for _ in 0..22 {
        term = term.mul(x2).div(Dd::from_f64(-(k + 1.0) * (k + 2.0)));
        sin = sin.add(term);
        k += 2.0;
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    let mut cos = Dd::ONE;
    let mut term = Dd::ONE;
    let mut k = 0.0f64;
    for _ in 0..22 {
        term = term.mul(x2).div(Dd::from_f64(-(k + 1.0) * (k + 2.0)));
        cos = cos.add(term);
        k += 2.0;
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    (sin, cos)
}

/// `(cos, sin)` of the quarter phase `π a / (2N)`, with `a` reduced modulo
/// `4N` and the quadrant handled exactly.
pub(crate) fn quarter_phase(a: i64, n: usize) -> (Dd, Dd) {
    let period = 4 * n as i64;
    let r = a.rem_euclid(period);
    let quadrant = r / n as i64; // each quadrant spans N quarter units = π/2
    let m = r % n as i64;
    let x = Dd::PI.mul(Dd::from_ratio(m, 2 * n as i64));
    let (s, c) = sincos_taylor(x);
    match quadrant {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    }
}
