//! Bracketed one-dimensional root finding (Brent's method).

/// Reasons a solve can fail.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    NoBracket { lo: f64, hi: f64 },
    NotFinite(f64),
    MaxIterations { x: f64, residual: f64 },
}

impl std::fmt::Display for SolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveError::NoBracket { lo, hi } => write!(f, "no sign change on [{lo}, {hi}]"),
            SolveError::NotFinite(x) => write!(f, "objective not finite at {x}"),
            SolveError::MaxIterations { x, residual } => {
                write!(f, "no convergence (x = {x}, residual = {residual:e})")
            }
        }
    }
}

/// Brent root search on `[a, b]`; stops when `|f(x)| <= ftol`, or when
/// the bracket has shrunk to a few ulps (the best representable point).
pub fn brent<F>(mut f: F, a: f64, b: f64, ftol: f64, max_iter: usize) -> Result<f64, SolveError>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(SolveError::NotFinite(a));
    }
    if !fb.is_finite() {
        return Err(SolveError::NotFinite(b));
    }
    if fa.abs() <= ftol {
        return Ok(a);
    }
    if fb.abs() <= ftol {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(SolveError::NoBracket { lo: a, hi: b });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let m = 0.5 * (c - b);
        if fb.abs() <= ftol {
            return Ok(b);
        }
        if m.abs() <= tol {
            // bracket collapsed to adjacent floats; the caller judges the residual
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(SolveError::NotFinite(b));
        }
    }
    Err(SolveError::MaxIterations { x: b, residual: fb })
}

/// Grows a bracket geometrically around `guess` inside `[lo, hi]` until the
/// objective changes sign, then solves with [`brent`].
pub fn solve_bracketed<F>(
    mut f: F,
    guess: f64,
    lo: f64,
    hi: f64,
    ftol: f64,
    max_iter: usize,
) -> Result<f64, SolveError>
where
    F: FnMut(f64) -> f64,
{
    let fg = f(guess);
    if fg.is_finite() && fg.abs() <= ftol {
        return Ok(guess);
    }
    let mut width = 1e-4 * guess.abs().max(1e-4);
    loop {
        let a = (guess - width).max(lo);
        let b = (guess + width).min(hi);
        let fa = f(a);
        let fb = f(b);
        if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() {
            return brent(&mut f, a, b, ftol, max_iter);
        }
        if a <= lo && b >= hi {
            return Err(SolveError::NoBracket { lo, hi });
        }
        width *= 8.0;
    }
}
