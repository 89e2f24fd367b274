//! Nelder–Mead on a box. Trial points are projected onto the box before
//! they are evaluated, so the simplex never leaves it.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Bounds<const N: usize> {
    pub lower: [f64; N],
    pub upper: [f64; N],
}

impl<const N: usize> Bounds<N> {
    pub fn project(&self, x: [f64; N]) -> [f64; N] {
        std::array::from_fn(|i| x[i].clamp(self.lower[i], self.upper[i]))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexResult<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    pub initial_step: f64,
    pub x_tolerance: f64,
    pub max_iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn lerp<const N: usize>(from: &[f64; N], to: &[f64; N], t: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = from[i] + t * (to[i] - from[i]);
    }
    out
}

fn diameter<const N: usize>(points: &[([f64; N], f64)]) -> f64 {
    let best = &points[0].0;
    points[1..]
        .iter()
        .flat_map(|(p, _)| p.iter().zip(best).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max)
}

/// Minimizes `f` starting from `start`. Stops when the simplex shrinks
/// below `x_tolerance` (max-norm) or after `max_iterations`.
pub(crate) fn minimize<const N: usize>(
    f: impl Fn([f64; N]) -> f64,
    start: [f64; N],
    bounds: &Bounds<N>,
    opts: SimplexOptions,
) -> SimplexResult<N> {
    let eval = |x: [f64; N]| {
        let x = bounds.project(x);
        (x, f(x))
    };

    let x0 = bounds.project(start);
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push(eval(x0));
    for i in 0..N {
        let mut x = x0;
        // step away from the nearer wall so the vertex is not projected back onto x0
        let room_up = bounds.upper[i] - x0[i];
        let room_down = x0[i] - bounds.lower[i];
        x[i] += if room_up >= room_down {
            opts.initial_step.min(room_up.max(0.0))
        } else {
            -opts.initial_step.min(room_down)
        };
        simplex.push(eval(x));
    }

    let order = |s: &mut Vec<([f64; N], f64)>| {
        s.sort_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then_with(|| a.0.partial_cmp(&b.0).unwrap())
        });
    };

    let mut iterations = 0;
    order(&mut simplex);
    while iterations < opts.max_iterations && diameter(&simplex) > opts.x_tolerance {
        iterations += 1;
        let mut centroid = [0.0; N];
        for (p, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += p[i] / N as f64;
            }
        }
        let worst = simplex[N];
        let second_worst = simplex[N - 1].1;
        let best = simplex[0].1;

        let reflected = eval(lerp(&centroid, &worst.0, -REFLECT));
        if reflected.1 < best {
            let expanded = eval(lerp(&centroid, &worst.0, -EXPAND));
            simplex[N] = if expanded.1 < reflected.1 {
                expanded
            } else {
                reflected
            };
        } else if reflected.1 < second_worst {
            simplex[N] = reflected;
        } else {
            let contracted = if reflected.1 < worst.1 {
                eval(lerp(&centroid, &reflected.0, CONTRACT))
            } else {
                eval(lerp(&centroid, &worst.0, CONTRACT))
            };
            if contracted.1 < worst.1.min(reflected.1) {
                simplex[N] = contracted;
            } else {
                let anchor = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    *vertex = eval(lerp(&anchor, &vertex.0, SHRINK));
                }
            }
        }
        order(&mut simplex);
    }

    SimplexResult {
        x: simplex[0].0,
        value: simplex[0].1,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WIDE: Bounds<2> = Bounds {
        lower: [-10.0, -10.0],
        upper: [10.0, 10.0],
    };

    fn opts() -> SimplexOptions {
        SimplexOptions {
            initial_step: 0.5,
            x_tolerance: 1e-12,
            max_iterations: 10_000,
        }
    }

    #[test]
    fn quadratic_bowl() {
        let r = minimize(
            |[x, y]| (x - 1.0).powi(2) + 10.0 * (y + 2.0).powi(2),
            [0.0, 0.0],
            &WIDE,
            opts(),
        );
        assert!((r.x[0] - 1.0).abs() < 1e-9);
        assert!((r.x[1] + 2.0).abs() < 1e-9);
        assert!(r.value < 1e-18);
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |[x, y]| (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2),
            [-1.2, 1.0],
            &WIDE,
            opts(),
        );
        assert!((r.x[0] - 1.0).abs() < 1e-6, "{:?}", r);
        assert!((r.x[1] - 1.0).abs() < 1e-6, "{:?}", r);
    }

    #[test]
    fn stays_inside_box() {
        let bounds = Bounds {
            lower: [0.0, 0.0],
            upper: [1.0, 1.0],
        };
        let r = minimize(
            |[x, y]| (x - 3.0).powi(2) + (y - 0.5).powi(2),
            [0.2, 0.2],
            &bounds,
            opts(),
        );
        assert!((r.x[0] - 1.0).abs() < 1e-9);
        assert!((r.x[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn iteration_cap() {
        let r = minimize(
            |[x, y]| x * x + y * y,
            [5.0, 5.0],
            &WIDE,
            SimplexOptions {
                max_iterations: 3,
                ..opts()
            },
        );
        assert_eq!(r.iterations, 3);
    }
}
