use crate::error::{Error, Result};

const MAX_EVALS: usize = 500;

/// Outcome of a scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
    /// False when the evaluation budget ran out before the tolerance was met.
    pub converged: bool,
    /// True when the objective kept decreasing toward an infinite end of the
    /// interval, or evaluated to `-inf`. `x` and `value` are then the best
    /// iterate seen.
    pub diverged: bool,
}

struct Counted<F> {
    f: F,
    n: usize,
}

impl<F: FnMut(f64) -> f64> Counted<F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.n += 1;
        (self.f)(x)
    }
}

/// Brent's golden-section / parabolic minimizer on the closed interval
/// `[a, b]`. Both endpoints are evaluated explicitly after the interior
/// search so monotone objectives resolve to a boundary. An endpoint where
/// `f` is NaN is replaced by a point just inside the interval.
pub fn brent_minimize<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Minimum> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "brent_minimize needs a finite interval, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::domain(format!("empty interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let mut cf = Counted { f, n: 0 };
    if a == b {
        let v = cf.eval(a);
        return Ok(Minimum {
            x: a,
            value: v,
            evaluations: 1,
            converged: true,
            diverged: v == f64::NEG_INFINITY,
        });
    }
    let (mut x, mut fx, converged) = fmin_interior(&mut cf, a, b, tol);

    let offset = |p: f64| f64::EPSILON.sqrt() * p.abs().max(1.0);
    for (end, inward) in [(a, a + offset(a).min(0.5 * (b - a))), (b, b - offset(b).min(0.5 * (b - a)))] {
        let mut pt = end;
        let mut v = cf.eval(end);
        if v.is_nan() {
            pt = inward;
            v = cf.eval(inward);
        }
        if !v.is_nan() && (v < fx || fx.is_nan()) {
            x = pt;
            fx = v;
        }
    }
    if fx.is_nan() {
        return Err(Error::numeric("objective is NaN everywhere it was evaluated"));
    }
    Ok(Minimum {
        x,
        value: fx,
        evaluations: cf.n,
        converged,
        diverged: fx == f64::NEG_INFINITY,
    })
}

// NaN is treated as +inf so the search moves away from it.
fn clean(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn fmin_interior<F: FnMut(f64) -> f64>(cf: &mut Counted<F>, ax: f64, bx: f64, tol: f64) -> (f64, f64, bool) {
    let c = 0.5 * (3.0 - 5f64.sqrt());
    let eps = f64::EPSILON.sqrt();
    let (mut a, mut b) = (ax, bx);
    let mut v = a + c * (b - a);
    let mut w = v;
    let mut x = v;
    let mut d = 0.0f64;
    let mut e = 0.0f64;
    let mut fx = clean(cf.eval(x));
    let mut fv = fx;
    let mut fw = fx;
    let tol3 = tol / 3.0;

    loop {
        if fx == f64::NEG_INFINITY {
            return (x, fx, true);
        }
        let xm = 0.5 * (a + b);
        let tol1 = eps * x.abs() + tol3;
        let t2 = 2.0 * tol1;
        if (x - xm).abs() <= t2 - 0.5 * (b - a) {
            return (x, fx, true);
        }
        if cf.n >= MAX_EVALS {
            return (x, fx, false);
        }
        let mut p = 0.0;
        let mut q = 0.0;
        let mut r = 0.0;
        if e.abs() > tol1 {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            r = e;
            e = d;
        }
        let mut u;
        if !p.is_finite() || !q.is_finite() || p.abs() >= (0.5 * q * r).abs() || p <= q * (a - x) || p >= q * (b - x) {
            e = if x < xm { b - x } else { a - x };
            d = c * e;
        } else {
            d = p / q;
            u = x + d;
            if u - a < t2 || b - u < t2 {
                d = if x >= xm { -tol1 } else { tol1 };
            }
        }
        u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = clean(cf.eval(u));
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
}

/// Minimize `f` over an interval whose ends may be infinite.
///
/// Infinite ends are handled by a change of variables followed by an
/// expanding bracket search. If the objective keeps decreasing toward an
/// infinite end the result has `diverged = true`; if it decreases toward a
/// finite end, that end is evaluated and returned.
pub fn minimize_on_interval<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Minimum> {
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::domain(format!("invalid interval ({a}, {b})")));
    }
    if a.is_finite() && b.is_finite() {
        return brent_minimize(f, a, b, tol);
    }
    if a == f64::INFINITY || b == f64::NEG_INFINITY {
        return Err(Error::domain(format!("invalid interval ({a}, {b})")));
    }
    let mut cf = Counted { f, n: 0 };
    // z -> x maps; `toward_finite` is the z direction that approaches a finite end.
    #[derive(Clone, Copy)]
    enum Map {
        Right(f64),
        Left(f64),
        Line,
    }
    let map = if a.is_finite() {
        Map::Right(a)
    } else if b.is_finite() {
        Map::Left(b)
    } else {
        Map::Line
    };
    let t = move |z: f64| match map {
        Map::Right(a) => a + z.exp(),
        Map::Left(b) => b - (-z).exp(),
        Map::Line => z,
    };
    let zmax = match map {
        Map::Line => 1e8,
        _ => 60.0,
    };
    let g = |z: f64, cf: &mut Counted<F>| clean(cf.eval(t(z)));

    let z0 = 0.0;
    let f0 = g(z0, &mut cf);
    let step0 = 1.0;
    let fr = g(z0 + step0, &mut cf);
    let fl = g(z0 - step0, &mut cf);
    let (lo, hi);
    if f0 <= fr && f0 <= fl {
        lo = z0 - step0;
        hi = z0 + step0;
    } else {
        let dir = if fr < fl { 1.0 } else { -1.0 };
        let mut prev = z0;
        let mut cur = z0 + dir * step0;
        let mut fcur = if dir > 0.0 { fr } else { fl };
        let mut step = 2.0 * step0;
        loop {
            let next = cur + dir * step;
            if next.abs() > zmax {
                // Ran off an end without bracketing.
                let heads_to_finite = match map {
                    Map::Right(_) => dir < 0.0,
                    Map::Left(_) => dir > 0.0,
                    Map::Line => false,
                };
                if heads_to_finite {
                    let end = match map {
                        Map::Right(a) => a,
                        Map::Left(b) => b,
                        Map::Line => unreachable!(),
                    };
                    let fe = cf.eval(end);
                    let (x, value) = if !fe.is_nan() && fe <= fcur { (end, fe) } else { (t(cur), fcur) };
                    return Ok(Minimum {
                        x,
                        value,
                        evaluations: cf.n,
                        converged: true,
                        diverged: value == f64::NEG_INFINITY,
                    });
                }
                return Ok(Minimum {
                    x: t(cur),
                    value: fcur,
                    evaluations: cf.n,
                    converged: false,
                    diverged: true,
                });
            }
            let fnext = g(next, &mut cf);
            if fnext == f64::NEG_INFINITY {
                return Ok(Minimum {
                    x: t(next),
                    value: fnext,
                    evaluations: cf.n,
                    converged: true,
                    diverged: true,
                });
            }
            if fnext > fcur {
                lo = prev.min(next);
                hi = prev.max(next);
                break;
            }
            prev = cur;
            cur = next;
            fcur = fnext;
            step *= 2.0;
            if cf.n >= MAX_EVALS {
                return Ok(Minimum {
                    x: t(cur),
                    value: fcur,
                    evaluations: cf.n,
                    converged: false,
                    diverged: false,
                });
            }
        }
    }
    let used = cf.n;
    let inner = brent_minimize(|z| cf.eval(t(z)), lo, hi, tol)?;
    Ok(Minimum {
        x: t(inner.x),
        value: inner.value,
        evaluations: used + inner.evaluations,
        converged: inner.converged,
        diverged: inner.diverged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let m = brent_minimize(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10).unwrap();
        assert!((m.x - 0.3).abs() < 1e-6);
        assert!(m.converged && !m.diverged);
        assert!(m.evaluations <= 50);
    }

    #[test]
    fn monotone_goes_to_endpoint() {
        let m = brent_minimize(|x| x, 2.0, 5.0, 1e-8).unwrap();
        assert_eq!(m.x, 2.0);
        assert_eq!(m.value, 2.0);
        let m = brent_minimize(|x| -x, 2.0, 5.0, 1e-8).unwrap();
        assert_eq!(m.x, 5.0);
    }

    #[test]
    fn nan_endpoint_is_nudged() {
        let m = brent_minimize(|x: f64| if x == 1.0 { f64::NAN } else { x }, 1.0, 2.0, 1e-8).unwrap();
        assert!(m.x > 1.0 && m.x < 1.0 + 1e-7, "{m:?}");
        assert!(m.value.is_finite());
    }

    #[test]
    fn semi_infinite_interior_minimum() {
        let m = minimize_on_interval(|x| (x - 7.0).powi(2), 0.0, f64::INFINITY, 1e-8).unwrap();
        assert!((m.x - 7.0).abs() < 1e-5, "{m:?}");
        assert!(!m.diverged);
    }

    #[test]
    fn semi_infinite_boundary_minimum() {
        let m = minimize_on_interval(|x| x, 3.0, f64::INFINITY, 1e-8).unwrap();
        assert_eq!(m.x, 3.0);
        assert!(!m.diverged);
    }

    #[test]
    fn unbounded_below_is_divergence() {
        let m = minimize_on_interval(|x| -x, 0.0, f64::INFINITY, 1e-8).unwrap();
        assert!(m.diverged);
        let m = minimize_on_interval(|x| x, f64::NEG_INFINITY, f64::INFINITY, 1e-8).unwrap();
        assert!(m.diverged);
    }

    #[test]
    fn whole_line() {
        let m = minimize_on_interval(|x| (x + 123.0).powi(2) + 1.0, f64::NEG_INFINITY, f64::INFINITY, 1e-8).unwrap();
        assert!((m.x + 123.0).abs() < 1e-4, "{m:?}");
    }
}
