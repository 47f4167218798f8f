mod common;

use linprobe_core::graphs::{
    brute_force_connected_counts, f_closed_form, f_numeric, graph_counts, leading_singular_coefficient, tree_count,
    tree_series, wright_series_numeric,
};
use linprobe_core::parking::parking_poly;
use linprobe_core::polyalg::{factorial, Integer, Poly, Rational, Series};
use num_traits::{One, Pow, Zero};

#[test]
fn counts_match_subset_enumeration() {
    let counts = graph_counts(6).unwrap();
    for v in 1..=6 {
        let reference = common::connected_graphs(v);
        let got: Vec<(usize, Integer)> = reference.iter().map(|(&e, &c)| (e, Integer::from(c))).collect();
        assert_eq!(counts.rows_for(v), got, "{v} vertices");
        assert_eq!(brute_force_connected_counts(v).unwrap().rows_for(v), got);
    }
}

#[test]
fn small_tables() {
    let counts = graph_counts(4).unwrap();
    assert_eq!(counts.rows_for(3), vec![(2, Integer::from(3)), (3, Integer::from(1))]);
    assert_eq!(counts.get(3, 4), Integer::from(16));
    assert!(brute_force_connected_counts(7).is_err());
}

#[test]
fn counts_vanish_outside_edge_range() {
    let counts = graph_counts(12).unwrap();
    for v in 1..=12 {
        for e in 0..=v * (v - 1) / 2 + 2 {
            let possible = e + 1 >= v && e <= v * (v - 1) / 2;
            assert_eq!(!counts.get(e, v).is_zero(), possible, "C_({e},{v})");
        }
    }
    for n in 0..=11usize {
        assert_eq!(
            counts.get(n, n + 1),
            Pow::pow(&Integer::from(n + 1), n.saturating_sub(1) as u32)
        );
        assert_eq!(counts.get(n, n + 1), tree_count(n + 1));
    }
}

#[test]
fn shifted_parking_polys_count_graphs() {
    let counts = graph_counts(11).unwrap();
    for nu in 0..=10 {
        let shifted = parking_poly(nu).poly.shift_x_to_1_plus_w();
        for k in 0..=4 {
            assert_eq!(shifted.coeff(k), counts.get(nu + k, nu + 1), "nu = {nu}, k = {k}");
        }
    }
}

#[test]
fn exponential_formula_closes() {
    // sum over connected graphs composes to all graphs: exp(C(1, z)) = sum 2^(v(v-1)/2) z^v / v!
    let order = 5;
    let counts = graph_counts(order).unwrap();
    let connected = Series::new(
        (0..=order)
            .map(|v| {
                if v == 0 {
                    Rational::zero()
                } else {
                    Rational::new(counts.total_for(v), factorial(v as u64))
                }
            })
            .collect(),
        order,
    );
    let all = connected.exp().unwrap();
    for v in 0..=order {
        let want = Rational::new(
            Pow::pow(&Integer::from(2), (v * v.saturating_sub(1) / 2) as u32),
            factorial(v as u64),
        );
        assert_eq!(*all.coeff(v), want, "v = {v}");
    }
}

#[test]
fn tree_series_identities() {
    let t = tree_series(14);
    t.check_identities().unwrap();
    for n in 1..=14u32 {
        assert_eq!(
            *t.series.coeff(n as usize),
            Rational::new(Pow::pow(&Integer::from(n), n - 1), factorial(n as u64))
        );
    }
}

#[test]
fn unrooted_tree_series() {
    let w0 = wright_series_numeric(0, 10).series;
    for n in 1..=10usize {
        let want = Rational::new(tree_count(n), factorial(n as u64));
        assert_eq!(*w0.coeff(n), want, "n = {n}");
    }
}

#[test]
fn f_rows_agree_through_order_twelve() {
    assert_eq!(f_closed_form(0, 12).unwrap().series, Series::one(12));
    for k in 0..=3 {
        assert_eq!(f_closed_form(k, 12).unwrap().series, f_numeric(k, 12).series, "row {k}");
    }
    assert!(f_closed_form(4, 12).is_err());
}

#[test]
fn f_row_one_is_known() {
    // [w^1] f = t^2 / (2 (1-t)^2)
    let numerator = Series::new(Poly::<Rational>::from_i64s(&[0, 0, 1]).into_coeffs(), 12);
    let denominator = Series::new(Poly::<Rational>::from_i64s(&[2, -4, 2]).into_coeffs(), 12);
    let expected = numerator.mul(&denominator.reciprocal_scaled());
    assert_eq!(f_numeric(1, 12).series, expected);
}

trait ReciprocalScaled {
    fn reciprocal_scaled(&self) -> Self;
}

impl ReciprocalScaled for Series<Rational> {
    /// Reciprocal of a series whose constant term is any nonzero rational.
    fn reciprocal_scaled(&self) -> Self {
        let c = self.coeff(0).clone();
        let unit = self.scale_by(&(Rational::one() / &c));
        unit.reciprocal().unwrap().scale_by(&(Rational::one() / c))
    }
}

#[test]
fn quartic_row_leading_term_spot_check() {
    let row = f_numeric(4, 24).series;
    let c = leading_singular_coefficient(&row, 11).expect("row 4 has pole order 11");
    assert_eq!(c, Rational::new(1105.into(), 1152.into()));
}
