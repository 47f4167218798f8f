//! Connected labelled graphs counted by edges, read off the parking
//! polynomials at `x = 1 + w`, together with the tree function and the
//! excess-indexed series of sparse connected graphs.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::parking::ParkingTable;
use crate::polyalg::{binomial, factorial, int_pow, rational, Integer, Poly, Rational, Series};

/// Largest vertex count the brute-force oracle accepts.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 6;

/// Highest power of `w` for which the closed-form expansion of `f(w, t)` is known.
pub const CLOSED_FORM_MAX_ROW: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex count {0} outside the brute-force range 1..={BRUTE_FORCE_MAX_VERTICES}")]
    OracleTooLarge(usize),
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("no closed form for row w^{0}; rows 0..={CLOSED_FORM_MAX_ROW} are known")]
    RowUnavailable(usize),
    #[error("identity {identity} fails at coefficient {index}")]
    IdentityFailed { identity: &'static str, index: usize },
}

/// Counts `C_{m,n}` of connected labelled graphs with `m` edges on `n` vertices.
/// Absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphCountTable {
    entries: BTreeMap<(usize, usize), Integer>,
}

impl GraphCountTable {
    pub fn get(&self, edges: usize, vertices: usize) -> Integer {
        self.entries
            .get(&(edges, vertices))
            .cloned()
            .unwrap_or_else(Integer::zero)
    }

    fn insert(&mut self, edges: usize, vertices: usize, count: Integer) {
        if !count.is_zero() {
            self.entries.insert((edges, vertices), count);
        }
    }

    /// `(edges, count)` rows for one vertex count, in increasing edge order.
    pub fn rows_for(&self, vertices: usize) -> Vec<(usize, Integer)> {
        self.entries
            .iter()
            .filter(|((_, v), _)| *v == vertices)
            .map(|((e, _), c)| (*e, c.clone()))
            .collect()
    }

    /// Total number of connected graphs on `vertices` vertices.
    pub fn total_for(&self, vertices: usize) -> Integer {
        self.rows_for(vertices).into_iter().map(|(_, c)| c).sum()
    }

    /// Iterates `((edges, vertices), count)` over the nonzero entries.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Integer)> {
        self.entries.iter()
    }
}

/// `C_{m,n}` for every `n <= max_vertices`, from `F_{n-1}(1 + w)`: the
/// coefficient of `w^k` is `C_{n-1+k, n}`.
pub fn graph_counts(max_vertices: usize) -> Result<GraphCountTable, GraphError> {
    graph_counts_with(&mut ParkingTable::new(), max_vertices)
}

pub fn graph_counts_with(table: &mut ParkingTable, max_vertices: usize) -> Result<GraphCountTable, GraphError> {
    if max_vertices == 0 {
        return Err(GraphError::NoVertices);
    }
    let mut out = GraphCountTable::default();
    for vertices in 1..=max_vertices {
        let shifted = table.get(vertices - 1).shift_x_to_1_plus_w();
        for (k, c) in shifted.coeffs().iter().enumerate() {
            out.insert(vertices - 1 + k, vertices, c.clone());
        }
    }
    Ok(out)
}

/// Enumerates all `2^(n(n-1)/2)` labelled graphs on `n` vertices and tallies
/// the connected ones by edge count.
pub fn brute_force_connected_counts(vertices: usize) -> Result<GraphCountTable, GraphError> {
    if vertices == 0 {
        return Err(GraphError::NoVertices);
    }
    if vertices > BRUTE_FORCE_MAX_VERTICES {
        return Err(GraphError::OracleTooLarge(vertices));
    }
    let pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|i| (i + 1..vertices).map(move |j| (i, j)))
        .collect();
    let mut tally = vec![0u64; pairs.len() + 1];
    for mask in 0u64..1 << pairs.len() {
        let mut adjacency = vec![0u32; vertices];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                adjacency[i] |= 1 << j;
                adjacency[j] |= 1 << i;
            }
        }
        if is_connected(&adjacency) {
            tally[mask.count_ones() as usize] += 1;
        }
    }
    let mut out = GraphCountTable::default();
    for (edges, count) in tally.into_iter().enumerate() {
        out.insert(edges, vertices, Integer::from(count));
    }
    Ok(out)
}

/// Depth-first search from vertex 0 over adjacency bitmasks.
fn is_connected(adjacency: &[u32]) -> bool {
    let full = (1u32 << adjacency.len()) - 1;
    let mut seen = 1u32;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        let mut fresh = adjacency[v] & !seen;
        seen |= fresh;
        while fresh != 0 {
            let u = fresh.trailing_zeros() as usize;
            fresh &= fresh - 1;
            stack.push(u);
        }
    }
    seen == full
}

/// The tree function `T(z) = sum n^(n-1) z^n / n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeSeries {
    pub series: Series<Rational>,
}

impl TreeSeries {
    /// Checks `T = z e^T` and `z T' = T / (1 - T)` through the series order.
    pub fn check_identities(&self) -> Result<(), GraphError> {
        let t = &self.series;
        let order = t.order();
        let fixed_point = t.exp().expect("T has zero constant term").mul_z();
        compare(t, &fixed_point, "T = z exp(T)")?;

        let z_derivative = Series::new(
            t.coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(n.into()))
                .collect(),
            order,
        );
        let one_minus_t = Series::one(order).sub(t);
        let rhs = t.mul(&one_minus_t.reciprocal().expect("1 - T has constant term one"));
        compare(&z_derivative, &rhs, "z T' = T / (1 - T)")
    }
}

fn compare(lhs: &Series<Rational>, rhs: &Series<Rational>, identity: &'static str) -> Result<(), GraphError> {
    match lhs.coeffs().iter().zip(rhs.coeffs()).position(|(a, b)| a != b) {
        None => Ok(()),
        Some(index) => Err(GraphError::IdentityFailed { identity, index }),
    }
}

pub fn tree_series(order: usize) -> TreeSeries {
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                Rational::zero()
            } else {
                Rational::new(int_pow(n as i64, n as u64 - 1), factorial(n as u64))
            }
        })
        .collect();
    TreeSeries {
        series: Series::new(coeffs, order),
    }
}

/// `W_k(z) = sum_n C_{n-1+k, n} z^n / n!`: connected graphs with `k - 1`
/// more edges than vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct WrightSeries {
    pub k: usize,
    pub series: Series<Rational>,
}

pub fn wright_series_numeric(k: usize, order: usize) -> WrightSeries {
    let counts = graph_counts(order.max(1)).expect("at least one vertex");
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                Rational::zero()
            } else {
                Rational::new(counts.get(n - 1 + k, n), factorial(n as u64))
            }
        })
        .collect();
    WrightSeries {
        k,
        series: Series::new(coeffs, order),
    }
}

/// `[w^k] f(w, t)` as a series in `t`, where `F(1 + w, z) = (T/z) f(w, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FExpansionRow {
    pub k: usize,
    pub series: Series<Rational>,
}

/// `coef * t^shift * numerator(t) / (1 - t)^pole`
struct RationalTerm {
    coef: Rational,
    shift: usize,
    pole: usize,
    numerator: &'static [i64],
}

const fn term(
    num: i64,
    den: i64,
    shift: usize,
    pole: usize,
    numerator: &'static [i64],
) -> (i64, i64, usize, usize, &'static [i64]) {
    (num, den, shift, pole, numerator)
}

type RawTerm = (i64, i64, usize, usize, &'static [i64]);

const ROW_1: &[RawTerm] = &[term(1, 2, 2, 2, &[1])];
const ROW_2: &[RawTerm] = &[term(5, 24, 4, 5, &[5, -2]), term(1, 4, 3, 4, &[4, -2])];
const ROW_3: &[RawTerm] = &[
    term(5, 16, 7, 8, &[8, -2]),
    term(55, 48, 6, 7, &[7, -2]),
    term(73, 48, 5, 6, &[6, -2]),
    term(3, 4, 4, 5, &[5, -2]),
    term(1, 24, 3, 4, &[4, -2]),
];

impl RationalTerm {
    fn expand(&self, order: usize) -> Series<Rational> {
        // (1 - t)^(-pole) = sum C(pole + j - 1, j) t^j
        let pole_series = Series::new(
            (0..=order)
                .map(|j| Rational::from_integer(binomial((self.pole + j) as u64 - 1, j as u64)))
                .collect(),
            order,
        );
        let mut numerator = vec![Rational::zero(); self.shift];
        numerator.extend(
            self.numerator
                .iter()
                .map(|&c| &self.coef * Rational::from_integer(c.into())),
        );
        Series::new(numerator, order).mul(&pole_series)
    }
}

/// Expands the known closed form of `[w^k] f(w, t)` through `t^order`.
pub fn f_closed_form(k: usize, order: usize) -> Result<FExpansionRow, GraphError> {
    let raw: &[RawTerm] = match k {
        0 => {
            return Ok(FExpansionRow {
                k,
                series: Series::one(order),
            })
        }
        1 => ROW_1,
        2 => ROW_2,
        3 => ROW_3,
        _ => return Err(GraphError::RowUnavailable(k)),
    };
    let series = raw
        .iter()
        .map(|&(num, den, shift, pole, numerator)| RationalTerm {
            coef: rational(num, den),
            shift,
            pole,
            numerator,
        })
        .fold(Series::zero(order), |acc, t| acc.add(&t.expand(order)));
    Ok(FExpansionRow { k, series })
}

/// `[w^k] f(w, t)` computed from the parking polynomials: the series
/// `(z / T(z)) sum_n [w^k] F_n(1 + w) z^n / n!` re-expressed in `t = T(z)`
/// by substituting `z = t e^{-t}`.
pub fn f_numeric(k: usize, order: usize) -> FExpansionRow {
    f_numeric_with(&mut ParkingTable::new(), k, order)
}

pub fn f_numeric_with(table: &mut ParkingTable, k: usize, order: usize) -> FExpansionRow {
    let row_in_z = Series::new(
        table
            .up_to(order)
            .iter()
            .enumerate()
            .map(|(n, f)| {
                let shifted = f.shift_x_to_1_plus_w();
                Rational::new(shifted.coeff(k), factorial(n as u64))
            })
            .collect(),
        order,
    );
    // T(z)/z = sum (n+1)^n z^n / (n+1)!
    let tree_over_z = Series::new(
        (0..=order)
            .map(|n| Rational::new(int_pow(n as i64 + 1, n as u64), factorial(n as u64 + 1)))
            .collect(),
        order,
    );
    let in_z = row_in_z.mul(&tree_over_z.reciprocal().expect("T/z has constant term one"));
    // z = t e^{-t} = sum (-1)^(n-1) t^n / (n-1)!
    let z_of_t = Series::new(
        (0..=order)
            .map(|n| match n {
                0 => Rational::zero(),
                _ => {
                    let sign = if n % 2 == 1 { 1 } else { -1 };
                    Rational::new(sign.into(), factorial(n as u64 - 1))
                }
            })
            .collect(),
        order,
    );
    let series = in_z.compose(&z_of_t).expect("z(t) has zero constant term");
    FExpansionRow { k, series }
}

/// For a row of the form `sum_a c_a t^a (a + 1 - 2t) / (1 - t)^(a+1)` with
/// largest pole order `pole`, returns `c` for the most singular term, or
/// `None` if the row times `(1 - t)^pole` is not a polynomial of degree
/// at most `pole` within the computed order.
pub fn leading_singular_coefficient(row: &Series<Rational>, pole: usize) -> Option<Rational> {
    let order = row.order();
    let factor = Poly::<Rational>::from_i64s(&[1, -1]).pow(pole as u64);
    let cleared = row.mul(&Series::new(factor.into_coeffs(), order));
    if cleared.coeffs().iter().skip(pole + 1).any(|c| !c.is_zero()) {
        return None;
    }
    let at_one: Rational = cleared.coeffs().iter().cloned().sum();
    Some(at_one / Rational::from_integer(Integer::from(pole as i64 - 2)))
}

/// `n^(n-2)` labelled trees on `n` vertices (1 for `n <= 1`).
pub fn tree_count(vertices: usize) -> Integer {
    if vertices <= 1 {
        Integer::one()
    } else {
        int_pow(vertices as i64, vertices as u64 - 2)
    }
}
