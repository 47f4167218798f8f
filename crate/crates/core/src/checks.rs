//! Cross-route identity suite behind `linprobe selfcheck`.
//!
//! Each check recomputes one relation by two independent paths at modest
//! sizes and reports the first disagreement.

use num_traits::One;

use crate::graphs::{brute_force_connected_counts, f_closed_form, f_numeric_with, graph_counts_with, tree_series};
use crate::moments::{
    factorial_moment_lagrange, mean_displacement, moments_from_poly_with, q_function, q_generating_check,
    q_identities_check, second_factorial_moment,
};
use crate::parking::{
    confined_count, confined_poly_with, displacement_poly_with, inversion_rows, parking_count, parking_poly_via_log,
    InversionTransformRow, ParkingTable,
};
use crate::polyalg::{Integer, Poly, Rational, Series};
use crate::simulate::{exhaustive_distribution, rotation_symmetry_check_all};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// `None` on success, otherwise the first failure.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type Check = fn(&mut ParkingTable) -> Result<(), String>;

const CHECKS: &[(&str, Check)] = &[
    ("parking_small_values", parking_small_values),
    ("parking_counts", parking_counts),
    ("parking_log_route", parking_log_route),
    ("transform_rows", transform_rows),
    ("distribution_vs_enumeration", distribution_vs_enumeration),
    ("graph_counts_vs_brute_force", graph_counts_vs_brute_force),
    ("tree_function_identities", tree_function_identities),
    ("f_rows_closed_vs_numeric", f_rows_closed_vs_numeric),
    ("mean_closed_form", mean_closed_form),
    ("second_factorial_closed_form", second_factorial_closed_form),
    ("extraction_route", extraction_route),
    ("q_generating_function", q_generating_function),
    ("q_identities", q_identities),
    ("mean_probes", mean_probes),
    ("rotation_symmetry", rotation_symmetry),
    ("updown_counts", updown_counts),
];

/// Runs every check in a fixed order.
pub fn run_all() -> Vec<CheckOutcome> {
    let mut table = ParkingTable::new();
    CHECKS
        .iter()
        .map(|&(name, check)| CheckOutcome {
            name,
            failure: check(&mut table).err(),
        })
        .collect()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn parking_small_values(table: &mut ParkingTable) -> Result<(), String> {
    let expected: [&[i64]; 4] = [&[1], &[1], &[2, 1], &[6, 6, 3, 1]];
    for (n, coeffs) in expected.iter().enumerate() {
        ensure(*table.get(n) == Poly::from_i64s(coeffs), || format!("F_{n} mismatch"))?;
    }
    Ok(())
}

fn parking_counts(table: &mut ParkingTable) -> Result<(), String> {
    for n in 1..=12 {
        let f = table.get(n);
        ensure(f.eval(&Integer::one()) == parking_count(n), || format!("F_{n}(1)"))?;
        ensure(f.degree() == Some(n * (n - 1) / 2), || format!("deg F_{n}"))?;
        ensure(f.coeffs().iter().all(|c| c.sign() == num_bigint::Sign::Plus), || {
            format!("F_{n} has a non-positive coefficient")
        })?;
    }
    Ok(())
}

fn parking_log_route(table: &mut ParkingTable) -> Result<(), String> {
    for n in 0..=12 {
        let via_log = parking_poly_via_log(n).map_err(|e| e.to_string())?;
        ensure(via_log.poly == *table.get(n), || format!("F_{n} via log"))?;
    }
    Ok(())
}

fn transform_rows(table: &mut ParkingTable) -> Result<(), String> {
    let order = 12;
    let rows = inversion_rows(order);
    for n in 0..=order {
        let prev = n.checked_sub(1).map(|p| &rows[p].a);
        ensure(rows[n].is_consistent(table.get(n), prev), || format!("row {n}"))?;
    }
    // A(z) = exp(B(z)) and exp(C(z)) = sum x^{n(n-1)/2} z^n / n!
    let egf = |f: fn(&InversionTransformRow) -> &Poly<Integer>| {
        Series::from_egf(rows.iter().map(|row| f(row).to_rational()).collect(), order)
    };
    let a = egf(|row| &row.a);
    let b = egf(|row| &row.b);
    let c = egf(|row| &row.c);
    ensure(b.exp().map_err(|e| e.to_string())? == a, || "A = exp(B)".into())?;
    let g = c.exp().map_err(|e| e.to_string())?;
    ensure(g == crate::parking::all_graphs_series(order), || "exp(C) = G".into())
}

fn distribution_vs_enumeration(table: &mut ParkingTable) -> Result<(), String> {
    for m in 2..=6 {
        for n in 1..m {
            let all = exhaustive_distribution(m, n, false).map_err(|e| e.to_string())?;
            let confined = exhaustive_distribution(m, n, true).map_err(|e| e.to_string())?;
            let d = displacement_poly_with(table, m, n).map_err(|e| e.to_string())?;
            let f = confined_poly_with(table, m, n).map_err(|e| e.to_string())?;
            ensure(counts_match(&d.poly, &all.dense_counts()), || format!("D_({m},{n})"))?;
            ensure(counts_match(&f.poly, &confined.dense_counts()), || {
                format!("F_({m},{n})")
            })?;
            ensure(f.poly.eval(&Integer::one()) == confined_count(m, n), || {
                format!("F_({m},{n})(1)")
            })?;
        }
    }
    Ok(())
}

fn counts_match(poly: &Poly<Integer>, counts: &[u64]) -> bool {
    poly.coeffs().len() == counts.len() && poly.coeffs().iter().zip(counts).all(|(a, &b)| *a == Integer::from(b))
}

fn graph_counts_vs_brute_force(table: &mut ParkingTable) -> Result<(), String> {
    let counts = graph_counts_with(table, 5).map_err(|e| e.to_string())?;
    for vertices in 1..=5 {
        let brute = brute_force_connected_counts(vertices).map_err(|e| e.to_string())?;
        ensure(counts.rows_for(vertices) == brute.rows_for(vertices), || {
            format!("{vertices} vertices")
        })?;
    }
    ensure(counts.get(3, 4) == Integer::from(16), || "C_(3,4) != 16".into())
}

fn tree_function_identities(_: &mut ParkingTable) -> Result<(), String> {
    tree_series(12).check_identities().map_err(|e| e.to_string())
}

fn f_rows_closed_vs_numeric(table: &mut ParkingTable) -> Result<(), String> {
    for k in 0..=3 {
        let closed = f_closed_form(k, 12).map_err(|e| e.to_string())?;
        ensure(closed == f_numeric_with(table, k, 12), || format!("row w^{k}"))?;
    }
    Ok(())
}

fn mean_closed_form(table: &mut ParkingTable) -> Result<(), String> {
    for m in 2..=10 {
        for n in 1..m {
            let closed = mean_displacement(m, n).map_err(|e| e.to_string())?;
            let oracle = moments_from_poly_with(table, m, n, 1).map_err(|e| e.to_string())?;
            ensure(closed == oracle, || format!("E[d] at ({m},{n})"))?;
        }
    }
    Ok(())
}

fn second_factorial_closed_form(table: &mut ParkingTable) -> Result<(), String> {
    for m in 2..=10 {
        for n in 1..m {
            let closed = second_factorial_moment(m, n).map_err(|e| e.to_string())?;
            let oracle = moments_from_poly_with(table, m, n, 2).map_err(|e| e.to_string())?;
            ensure(closed == oracle, || format!("E[C(d,2)] at ({m},{n})"))?;
        }
    }
    Ok(())
}

fn extraction_route(table: &mut ParkingTable) -> Result<(), String> {
    for m in 2..=8 {
        for n in 1..m {
            for j in 0..=3 {
                let route = factorial_moment_lagrange(j, m, n).map_err(|e| e.to_string())?;
                let oracle = moments_from_poly_with(table, m, n, j).map_err(|e| e.to_string())?;
                ensure(route == oracle, || format!("E[C(d,{j})] at ({m},{n})"))?;
            }
        }
    }
    Ok(())
}

fn q_generating_function(_: &mut ParkingTable) -> Result<(), String> {
    for r in 0..=4 {
        for m in 1..=8 {
            q_generating_check(r, m, 12).map_err(|e| format!("r={r} m={m}: {e}"))?;
        }
    }
    Ok(())
}

fn q_identities(_: &mut ParkingTable) -> Result<(), String> {
    for r in 1..=5 {
        for m in 2..=20 {
            for n in 1..m {
                q_identities_check(r, m, n).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}

fn mean_probes(_: &mut ParkingTable) -> Result<(), String> {
    for m in 2..=30 {
        for n in 1..m {
            let mean = mean_displacement(m, n).map_err(|e| e.to_string())?;
            let via_mean = Rational::one() + mean / Rational::from_integer(n.into());
            let known = (q_function(0, m, n - 1).value + Rational::one()) / Rational::from_integer(2.into());
            ensure(via_mean == known, || format!("probes at ({m},{n})"))?;
        }
    }
    Ok(())
}

fn rotation_symmetry(_: &mut ParkingTable) -> Result<(), String> {
    for m in 2..=5 {
        for n in 0..m {
            rotation_symmetry_check_all(m, n).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

/// Permutations of `0..n` with `p_0 < p_1 > p_2 < ...`, by backtracking.
fn count_updown(n: usize) -> u64 {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], n: usize) -> u64 {
        if prefix.len() == n {
            return 1;
        }
        let mut total = 0;
        for v in 0..n {
            if used[v] {
                continue;
            }
            if let Some(&last) = prefix.last() {
                let rising = prefix.len() % 2 == 1;
                if rising != (v > last) {
                    continue;
                }
            }
            used[v] = true;
            prefix.push(v);
            total += extend(prefix, used, n);
            prefix.pop();
            used[v] = false;
        }
        total
    }
    extend(&mut Vec::new(), &mut vec![false; n], n)
}

fn updown_counts(table: &mut ParkingTable) -> Result<(), String> {
    for n in 0..=7 {
        let value = table.get(n).eval(&Integer::from(-1));
        ensure(value == Integer::from(count_updown(n)), || format!("F_{n}(-1)"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn updown_enumerator() {
        let counts: Vec<u64> = (0..=7).map(count_updown).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 16, 61, 272]);
    }

    #[test]
    fn all_checks_pass() {
        for outcome in run_all() {
            assert!(outcome.passed(), "{}: {:?}", outcome.name, outcome.failure);
        }
    }
}
