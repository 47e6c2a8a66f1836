//! Scalar root finding and minimization used throughout the crate.
//!
//! Everything here works on monotone or unimodal functions of one real
//! variable. Root finding is plain bisection on a bracket that is grown by
//! doubling; minimization is golden-section search.

/// Relative tolerance used for inverses and Legendre maximizers.
pub const ROOT_REL_TOL: f64 = 1e-12;

/// Iteration cap for bisection loops.
pub const MAX_BISECTION_ITERS: usize = 200;

/// Cap on bracket doublings (2^1100 overflows f64 long before this).
const MAX_DOUBLINGS: usize = 1100;

/// Final state of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

impl Bisection {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisection for a nondecreasing `g` on `[lo, hi]` with `g(lo) <= target <= g(hi)`.
///
/// Stops when `hi - lo <= rel_tol * max(hi, tiny)` or after `max_iter` halvings.
pub fn bisect_increasing<G>(
    mut g: G,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Bisection
where
    G: FnMut(f64) -> f64,
{
    let mut iterations = 0;
    while iterations < max_iter {
        if hi - lo <= rel_tol * hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Bisection {
        root: 0.5 * (lo + hi),
        lo,
        hi,
        iterations,
    }
}

/// Solves `g(t) = y` for `t >= 0` where `g` is strictly increasing with `g(0) = 0`.
///
/// The upper bracket is grown through 1, 2, 4, ... until `g(hi) >= y`.
/// Returns `None` if no bracket is found before overflow.
pub fn solve_increasing<G>(mut g: G, y: f64) -> Option<f64>
where
    G: FnMut(f64) -> f64,
{
    if y <= 0.0 {
        return Some(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while g(hi) < y {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return None;
        }
    }
    if lo == 0.0 {
        // Shrink towards zero first so tiny roots keep relative accuracy.
        while hi > f64::MIN_POSITIVE && g(hi * 0.5) >= y {
            hi *= 0.5;
        }
        lo = hi * 0.5;
    }
    Some(bisect_increasing(g, y, lo, hi, ROOT_REL_TOL, MAX_BISECTION_ITERS).root)
}

/// Result of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSection {
    pub argmin: f64,
    pub min: f64,
    pub iterations: usize,
    pub width: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
pub fn golden_section_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> GoldenSection
where
    F: FnMut(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a).abs() > tol && iterations < max_iter {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let (argmin, min) = if fc <= fd { (c, fc) } else { (d, fd) };
    GoldenSection {
        argmin,
        min,
        iterations,
        width: (b - a).abs(),
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_sqrt_two() {
        let b = bisect_increasing(|t| t * t, 2.0, 1.0, 2.0, 1e-14, 200);
        assert!((b.root - std::f64::consts::SQRT_2).abs() < 1e-13);
        assert!(b.width() <= 1e-14 * 2.0);
    }

    #[test]
    fn solve_increasing_handles_tiny_and_huge_targets() {
        let t = solve_increasing(|t| t * t * t, 1e-30).unwrap();
        assert!((t / 1e-10 - 1.0).abs() < 1e-11);
        let t = solve_increasing(|t| t * t, 1e20).unwrap();
        assert!((t / 1e10 - 1.0).abs() < 1e-11);
        assert_eq!(solve_increasing(|t| t, 0.0), Some(0.0));
    }

    #[test]
    fn solve_increasing_gives_up_on_bounded_function() {
        assert_eq!(solve_increasing(|t| t / (1.0 + t), 2.0), None);
    }

    #[test]
    fn golden_section_on_parabola() {
        let g = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-10, 500);
        assert!((g.argmin - 0.3).abs() < 1e-7);
        assert!((g.min - 1.0).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        assert!((s.value() - (1.0 + 1e-15)).abs() < 1e-18);
    }
}
