//! Brute-force lattice-path enumerator shared by the partition tests and the
//! acceptance gate. It knows nothing about convex hulls: it walks every
//! lattice path with primitive steps on the admissible side of the line
//! y = theta x, keeps the concave (resp. convex) ones, and selects the
//! pointwise extreme path by direct comparison of heights.

use ech::Rational;

fn gcd(a: i64, b: i64) -> i64 {
    num::integer::gcd(a, b)
}

/// Height of the line y = theta x at integer x.
fn line(theta: Rational, x: i64) -> Rational {
    theta * Rational::from_integer(x)
}

/// All primitive steps (dx, dy) with 1 <= dx <= limit and |dy| bounded by
/// what a path pinched between the line and its chord can use.
fn primitive_steps(limit: i64, dy_bound: i64) -> Vec<(i64, i64)> {
    let mut steps = Vec::new();
    for dx in 1..=limit {
        for dy in -dy_bound..=dy_bound {
            if gcd(dx, dy.abs()) == 1 {
                steps.push((dx, dy));
            }
        }
    }
    steps
}

fn dy_bound(theta: Rational, m: i64) -> i64 {
    theta.numer().abs() * (m + 1) / theta.denom() + 2
}

/// Every concave path below the line from (0,0) to (m, floor(m theta)),
/// recorded as its full sequence of lattice points.
fn paths_below(theta: Rational, m: i64) -> Vec<Vec<(i64, i64)>> {
    let goal_y = line(theta, m).floor().to_integer();
    let steps = primitive_steps(m, dy_bound(theta, m));
    let mut found = Vec::new();
    let mut current = vec![(0i64, 0i64)];
    walk_below(theta, m, goal_y, &steps, &mut current, None, &mut found);
    found
}

fn walk_below(
    theta: Rational,
    m: i64,
    goal_y: i64,
    steps: &[(i64, i64)],
    current: &mut Vec<(i64, i64)>,
    last_step: Option<(i64, i64)>,
    found: &mut Vec<Vec<(i64, i64)>>,
) {
    let &(x, y) = current.last().unwrap();
    if x == m {
        if y == goal_y {
            found.push(current.clone());
        }
        return;
    }
    for &(dx, dy) in steps {
        let (nx, ny) = (x + dx, y + dy);
        if nx > m {
            continue;
        }
        if Rational::from_integer(ny) > line(theta, nx) {
            continue;
        }
        if let Some((pdx, pdy)) = last_step {
            // Concavity: slopes never increase along the path.
            if dy * pdx > pdy * dx {
                continue;
            }
        }
        // Later slopes are at most dy/dx, capping the reachable endpoint.
        if ny * dx + dy * (m - nx) < goal_y * dx {
            continue;
        }
        current.push((nx, ny));
        walk_below(theta, m, goal_y, steps, current, Some((dx, dy)), found);
        current.pop();
    }
}

/// Every convex path above the line from (0,0) to (m, ceil(m theta)).
fn paths_above(theta: Rational, m: i64) -> Vec<Vec<(i64, i64)>> {
    let goal_y = line(theta, m).ceil().to_integer();
    let steps = primitive_steps(m, dy_bound(theta, m));
    let mut found = Vec::new();
    let mut current = vec![(0i64, 0i64)];
    walk_above(theta, m, goal_y, &steps, &mut current, None, &mut found);
    found
}

fn walk_above(
    theta: Rational,
    m: i64,
    goal_y: i64,
    steps: &[(i64, i64)],
    current: &mut Vec<(i64, i64)>,
    last_step: Option<(i64, i64)>,
    found: &mut Vec<Vec<(i64, i64)>>,
) {
    let &(x, y) = current.last().unwrap();
    if x == m {
        if y == goal_y {
            found.push(current.clone());
        }
        return;
    }
    for &(dx, dy) in steps {
        let (nx, ny) = (x + dx, y + dy);
        if nx > m {
            continue;
        }
        if Rational::from_integer(ny) < line(theta, nx) {
            continue;
        }
        if let Some((pdx, pdy)) = last_step {
            // Convexity: slopes never decrease along the path.
            if dy * pdx < pdy * dx {
                continue;
            }
        }
        // Later slopes are at least dy/dx, flooring the reachable endpoint.
        if ny * dx + dy * (m - nx) > goal_y * dx {
            continue;
        }
        current.push((nx, ny));
        walk_above(theta, m, goal_y, steps, current, Some((dx, dy)), found);
        current.pop();
    }
}

/// Height of a path at integer x, by linear interpolation between the two
/// neighbouring lattice points.
fn height_at(path: &[(i64, i64)], x: i64) -> Rational {
    for w in path.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x0 <= x && x <= x1 {
            return Rational::from_integer(y0)
                + Rational::new(y1 - y0, x1 - x0) * Rational::from_integer(x - x0);
        }
    }
    unreachable!("x out of path range");
}

fn gaps_sorted(path: &[(i64, i64)]) -> Vec<u64> {
    let mut gaps: Vec<u64> = path.windows(2).map(|w| (w[1].0 - w[0].0) as u64).collect();
    gaps.sort_unstable_by(|a, b| b.cmp(a));
    gaps
}

/// The unique pointwise-highest concave path below the line, as its sorted
/// horizontal gaps between consecutive lattice points. Existence and
/// uniqueness of the pointwise maximum are themselves asserted.
pub fn highest_below(theta: Rational, m: u64) -> Vec<u64> {
    let m = m as i64;
    let all = paths_below(theta, m);
    assert!(!all.is_empty(), "no concave path below the line");
    let envelope: Vec<Rational> =
        (0..=m).map(|x| all.iter().map(|p| height_at(p, x)).max().unwrap()).collect();
    let best: Vec<&Vec<(i64, i64)>> = all
        .iter()
        .filter(|p| (0..=m).all(|x| height_at(p, x) == envelope[x as usize]))
        .collect();
    assert_eq!(best.len(), 1, "pointwise-highest path is not unique");
    gaps_sorted(best[0])
}

/// The unique pointwise-lowest convex path above the line.
pub fn lowest_above(theta: Rational, m: u64) -> Vec<u64> {
    let m = m as i64;
    let all = paths_above(theta, m);
    assert!(!all.is_empty(), "no convex path above the line");
    let envelope: Vec<Rational> =
        (0..=m).map(|x| all.iter().map(|p| height_at(p, x)).min().unwrap()).collect();
    let best: Vec<&Vec<(i64, i64)>> = all
        .iter()
        .filter(|p| (0..=m).all(|x| height_at(p, x) == envelope[x as usize]))
        .collect();
    assert_eq!(best.len(), 1, "pointwise-lowest path is not unique");
    gaps_sorted(best[0])
}
