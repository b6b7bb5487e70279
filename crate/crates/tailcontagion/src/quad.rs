//! Adaptive one-dimensional quadrature.
//!
//! Adaptive Simpson refinement with Richardson error control, plus a helper
//! that integrates over an unbounded right tail by accumulating dyadic blocks
//! until a caller-supplied analytic remainder bound is negligible.

/// A quadrature value together with an additive error bound.
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    (fa + 4.0 * fm + fb) * h / 6.0
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
    error_acc: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * abs_tol {
        *error_acc += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1, error_acc)
        + adapt(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1, error_acc)
}

/// Integrate `f` over `[a, b]` to an absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0 };
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    let mut error = 0.0;
    let value = adapt(f, a, b, fa, fm, fb, whole, abs_tol.max(f64::MIN_POSITIVE), 48, &mut error);
    Quad { value, error }
}

/// Integrate `f` over `[a, b]` to a relative tolerance, bootstrapping the
/// absolute tolerance from a coarse pass.
pub fn integrate_rel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Quad {
    let coarse = integrate(f, a, b, f64::INFINITY);
    let scale = coarse.value.abs().max(1e-300);
    integrate(f, a, b, rel_tol * scale)
}

/// Integrate `f` over `[a, ∞)`.
///
/// Accumulates dyadic blocks `[a·2^j, a·2^{j+1}]` (requires `a > 0`) and stops
/// once `tail_bound(T)`, an analytic upper bound on `∫_T^∞ f`, drops below
/// `rel_tol` times the accumulated value. The returned error adds the final
/// remainder bound to the per-block quadrature errors.
pub fn integrate_tail<F, B>(f: &F, a: f64, rel_tol: f64, tail_bound: B) -> Quad
where
    F: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    assert!(a > 0.0, "tail integration needs a positive left endpoint");
    let mut acc = 0.0f64;
    let mut err = 0.0;
    let mut left = a;
    for _ in 0..2000 {
        let right = 2.0 * left;
        // Until the accumulator is nonzero there is no meaningful scale for
        // an absolute tolerance; let the block bootstrap its own.
        let block = if acc == 0.0 {
            integrate_rel(f, left, right, 0.125 * rel_tol)
        } else {
            integrate(f, left, right, 0.125 * rel_tol * acc.abs())
        };
        acc += block.value;
        err += block.error;
        left = right;
        let remainder = tail_bound(left);
        if remainder <= rel_tol * acc.abs().max(f64::MIN_POSITIVE) {
            return Quad { value: acc, error: err + remainder };
        }
    }
    Quad { value: acc, error: err + tail_bound(left) }
}
