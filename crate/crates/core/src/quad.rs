//! Small numerical kernels: composite trapezoid, Gauss–Legendre panels and
//! bracketing bisection.

use crate::scalar::Scalar;

/// Composite trapezoid rule of `f` over `[a, b]` with `panels` panels.
pub(crate) fn trapezoid<T: Scalar, F>(a: T, b: T, panels: usize, mut f: F) -> T
where
    F: FnMut(T) -> T,
{
    let panels = panels.max(1);
    let n = T::from_count(panels);
    let h = (b - a) / n;
    let mut sum = (f(a) + f(b)) * T::lit(0.5);
    for i in 1..panels {
        let x = a + (b - a) * (T::from_count(i) / n);
        sum = sum + f(x);
    }
    sum * h
}

/// Bisects `[lo, hi]` on a monotone predicate with `pred(lo) == false` and
/// `pred(hi) == true`, returning the interval end satisfying the predicate
/// once the bracket is narrower than `tol` or cannot shrink further.
pub(crate) fn bisect_predicate<T: Scalar, P>(mut lo: T, mut hi: T, tol: T, mut pred: P) -> T
where
    P: FnMut(T) -> bool,
{
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
