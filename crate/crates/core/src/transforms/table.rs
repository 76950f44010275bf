use std::f64::consts::PI;

/// `cos(pi k / m)` and `sin(pi k / m)` for `k` in `0..2m`.
///
/// Values are folded into the first quadrant before evaluation so that the
/// exact zeros and units of the circle (`k = 0, m/2, m, 3m/2`) come out exact.
pub(crate) struct HalfTurnTable {
    m: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl HalfTurnTable {
    pub(crate) fn new(m: usize) -> Self {
        let period = 2 * m;
        let mut cos = Vec::with_capacity(period);
        let mut sin = Vec::with_capacity(period);
        for k in 0..period {
            let (s, c) = quadrant_sin_cos(k, m);
            cos.push(c);
            sin.push(s);
        }
        HalfTurnTable { m, cos, sin }
    }

    /// Index of the angle `pi * p / m` for any integer product `p`.
    #[inline]
    pub(crate) fn slot(&self, p: i64) -> usize {
        p.rem_euclid(2 * self.m as i64) as usize
    }

    #[inline]
    pub(crate) fn cos(&self, slot: usize) -> f64 {
        self.cos[slot]
    }

    #[inline]
    pub(crate) fn sin(&self, slot: usize) -> f64 {
        self.sin[slot]
    }
}

/// `(sin, cos)` of `pi k / m` for `0 <= k < 2m`, evaluated on a reduced angle.
fn quadrant_sin_cos(k: usize, m: usize) -> (f64, f64) {
    // angle pi*k/m; work in units of quarter turns: 4k vs 2m
    let (k, m) = (k as i64, m as i64);
    let (sign_s, sign_c, k) = if k >= m { (-1.0, -1.0, k - m) } else { (1.0, 1.0, k) };
    // now 0 <= k < m, angle in [0, pi)
    if 2 * k == m {
        return (sign_s, 0.0);
    }
    let (s, c) = if 2 * k > m {
        let r = m - k; // pi - angle
        let (s, c) = reduced(r, m);
        (s, -c)
    } else {
        reduced(k, m)
    };
    (sign_s * s, sign_c * c)
}

/// `(sin, cos)` of `pi k / m` for `0 <= 2k < m`.
fn reduced(k: i64, m: i64) -> (f64, f64) {
    if k == 0 {
        return (0.0, 1.0);
    }
    // beyond pi/4 swap through the complementary angle
    if 4 * k > m && m % 2 == 0 {
        // complementary angle is pi (m/2 - k)/m, an integer multiple when m is even
        let comp = m / 2 - k;
        let a = PI * comp as f64 / m as f64;
        return (a.cos(), a.sin());
    }
    let a = PI * k as f64 / m as f64;
    (a.sin(), a.cos())
}
