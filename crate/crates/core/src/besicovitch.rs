//! Unions of q+1 lines with distinct slopes, their point multiplicities, and
//! the exact incidence count `#B = q(q+1)/2 + Σ (m_P-1)(m_P-2)/2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::geom::{line_points, Line, Point, Slope};
use crate::gf::{Felt, FieldTable, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BesicovitchError {
    #[error("a configuration over GF({q}) needs {expected} intercepts, got {got}")]
    WrongLength { q: usize, expected: usize, got: usize },
    #[error("cannot parse intercept list: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("InternalInconsistency: direct count {direct} but incidence formula gives {formula}")]
    InternalInconsistency { direct: u64, formula: u64 },
}

/// One intercept per slope: positions `0..q` hold `b_i` for slope `i` in
/// element-index order and position `q` holds the `a` of the vertical line.
#[derive(Clone)]
pub struct LineConfig<'f> {
    field: &'f FieldTable,
    intercepts: Vec<Felt>,
}

impl<'f> LineConfig<'f> {
    pub fn new(field: &'f FieldTable, intercepts: Vec<Felt>) -> Result<Self, BesicovitchError> {
        let q = field.q();
        if intercepts.len() != q + 1 {
            return Err(BesicovitchError::WrongLength {
                q,
                expected: q + 1,
                got: intercepts.len(),
            });
        }
        if let Some(bad) = intercepts.iter().find(|b| b.idx() >= q) {
            return Err(GfError::OutOfRange { idx: bad.idx(), q }.into());
        }
        Ok(Self { field, intercepts })
    }

    pub fn from_indices(field: &'f FieldTable, idx: &[usize]) -> Result<Self, BesicovitchError> {
        let intercepts = idx
            .iter()
            .map(|&i| field.elem(i))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, intercepts)
    }

    /// Parses the comma-separated text form, e.g. `"0,2,2,0"` at q = 3.
    pub fn parse(field: &'f FieldTable, text: &str) -> Result<Self, BesicovitchError> {
        let idx = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| BesicovitchError::Parse(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(field, &idx)
    }

    /// All intercepts equal to zero: every line passes through the origin.
    pub fn zero(field: &'f FieldTable) -> Self {
        Self {
            field,
            intercepts: vec![Felt::ZERO; field.q() + 1],
        }
    }

    pub fn field(&self) -> &'f FieldTable {
        self.field
    }

    pub fn intercepts(&self) -> &[Felt] {
        &self.intercepts
    }

    pub fn indices(&self) -> Vec<usize> {
        self.intercepts.iter().map(|b| b.idx()).collect()
    }

    pub fn intercept(&self, slope: Slope) -> Felt {
        self.intercepts[slope.position(self.field.q())]
    }

    pub fn line(&self, slope: Slope) -> Line {
        Line::new(slope, self.intercept(slope))
    }

    /// The q+1 configured lines in slope order.
    pub fn lines(&self) -> impl Iterator<Item = Line> + '_ {
        Slope::all(self.field).map(move |s| self.line(s))
    }
}

impl PartialEq for LineConfig<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.intercepts == other.intercepts
    }
}

impl Eq for LineConfig<'_> {}

impl PartialOrd for LineConfig<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LineConfig<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.intercepts.cmp(&other.intercepts)
    }
}

impl fmt::Debug for LineConfig<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LineConfig[q={}; {}]", self.field.q(), self)
    }
}

impl fmt::Display for LineConfig<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.intercepts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Iterates over all q^(q+1) configurations in lexicographic order.
pub struct AllConfigs<'f> {
    field: &'f FieldTable,
    next: Option<Vec<Felt>>,
}

impl<'f> AllConfigs<'f> {
    pub fn new(field: &'f FieldTable) -> Self {
        Self {
            field,
            next: Some(vec![Felt::ZERO; field.q() + 1]),
        }
    }
}

impl<'f> Iterator for AllConfigs<'f> {
    type Item = LineConfig<'f>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let q = self.field.q();
        let mut succ = current.clone();
        let mut carry = true;
        for slot in succ.iter_mut().rev() {
            if slot.idx() + 1 < q {
                *slot = self.field.elem(slot.idx() + 1).unwrap();
                carry = false;
                break;
            }
            *slot = Felt::ZERO;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(LineConfig {
            field: self.field,
            intercepts: current,
        })
    }
}

/// Per-point line counts over the q×q plane, stored row-major by x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityGrid {
    q: usize,
    counts: Vec<u16>,
}

impl MultiplicityGrid {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, point: Point) -> u16 {
        self.counts[point.cell(self.q)]
    }

    pub fn counts(&self) -> &[u16] {
        &self.counts
    }

    /// Σ m_P; always q(q+1) for a full configuration.
    pub fn mass(&self) -> u64 {
        self.counts.iter().map(|&m| m as u64).sum()
    }

    pub fn max(&self) -> u16 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn excess(&self) -> u64 {
        self.counts.iter().map(|&m| pair_excess(m)).sum()
    }

    /// Multiplicity → number of points, for m ≥ 1.
    pub fn histogram(&self) -> BTreeMap<u16, u64> {
        let mut h = BTreeMap::new();
        for &m in self.counts.iter().filter(|&&m| m > 0) {
            *h.entry(m).or_insert(0) += 1;
        }
        h
    }

    pub fn triple_point_count(&self) -> usize {
        self.counts.iter().filter(|&&m| m >= 3).count()
    }
}

/// `(m-1)(m-2)/2` for points of the set, zero for points outside it.
#[inline]
pub fn pair_excess(m: u16) -> u64 {
    if m < 3 {
        0
    } else {
        let m = m as u64;
        (m - 1) * (m - 2) / 2
    }
}

pub fn multiplicity_map(config: &LineConfig<'_>) -> MultiplicityGrid {
    let field = config.field;
    let q = field.q();
    let mut counts = vec![0u16; q * q];
    for (slope, &b) in field.elements().zip(&config.intercepts) {
        for x in field.elements() {
            let y = field.add(field.mul(slope, x), b);
            counts[x.idx() * q + y.idx()] += 1;
        }
    }
    let a = config.intercepts[q].idx();
    for c in &mut counts[a * q..(a + 1) * q] {
        *c += 1;
    }
    MultiplicityGrid { q, counts }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceReport {
    pub cardinality: u64,
    pub excess: u64,
    pub histogram: BTreeMap<u16, u64>,
    pub lower_bound: u64,
}

/// Counts the union directly and through the incidence formula, failing if
/// the two disagree.
pub fn incidence_report(config: &LineConfig<'_>) -> Result<IncidenceReport, BesicovitchError> {
    let field = config.field;
    let q = field.q();

    let mut seen = vec![false; q * q];
    let mut direct = 0u64;
    for line in config.lines() {
        for p in line_points(field, &line) {
            let c = p.cell(q);
            if !seen[c] {
                seen[c] = true;
                direct += 1;
            }
        }
    }

    let grid = multiplicity_map(config);
    let excess = grid.excess();
    let lower_bound = (q * (q + 1) / 2) as u64;
    let histogram = grid.histogram();
    let from_hist: u64 = histogram.values().sum();
    if direct != lower_bound + excess || from_hist != direct {
        return Err(BesicovitchError::InternalInconsistency {
            direct,
            formula: lower_bound + excess,
        });
    }
    Ok(IncidenceReport {
        cardinality: direct,
        excess,
        histogram,
        lower_bound,
    })
}

/// `ℓ(i, -i²)` for every finite slope `i`, plus the vertical line `x = 0`.
pub fn b0_config(field: &FieldTable) -> LineConfig<'_> {
    let mut intercepts: Vec<Felt> = field
        .elements()
        .map(|i| field.neg(field.mul(i, i)))
        .collect();
    intercepts.push(Felt::ZERO);
    LineConfig { field, intercepts }
}

/// Excess of B₀: `(q-1)/2` for odd q, `0` for even q.
pub fn b0_excess(q: usize) -> u64 {
    if q % 2 == 1 {
        ((q - 1) / 2) as u64
    } else {
        0
    }
}

fn lines_without_triple_point(config: &LineConfig<'_>, grid: &MultiplicityGrid) -> Vec<Slope> {
    Slope::all(config.field)
        .filter(|&s| {
            line_points(config.field, &config.line(s))
                .iter()
                .all(|&p| grid.get(p) < 3)
        })
        .collect()
}

/// Slopes whose configured line contains no point of multiplicity ≥ 3, in
/// slope order. For odd q there is at most one.
pub fn triple_point_exceptions(config: &LineConfig<'_>) -> Vec<Slope> {
    lines_without_triple_point(config, &multiplicity_map(config))
}

/// Whether some configured line carries every point of multiplicity ≥ 3,
/// together with the quantities the lower bound `(q-1)/2` depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalCheck {
    pub covering_slope: Option<Slope>,
    /// Number of points with m_P ≥ 3.
    pub triple_points: usize,
    /// Lines containing no triple point; set only with a covering slope.
    pub delta: Option<usize>,
    pub excess: u64,
    pub max_multiplicity: u16,
    pub q: usize,
}

impl ConditionalCheck {
    /// `Some(excess ≥ (q-1)/2)` when q is odd and a covering slope exists.
    pub fn bound_holds(&self) -> Option<bool> {
        (self.q % 2 == 1 && self.covering_slope.is_some())
            .then(|| self.excess >= b0_excess(self.q))
    }

    pub fn is_equality_case(&self) -> bool {
        self.bound_holds().is_some() && self.excess == b0_excess(self.q)
    }

    /// The characterization of equality: exactly (q-1)/2 triple points, none
    /// of multiplicity above three.
    pub fn equality_shape(&self) -> bool {
        self.triple_points as u64 == b0_excess(self.q) && self.max_multiplicity == 3
    }
}

pub fn conditional_check(config: &LineConfig<'_>) -> ConditionalCheck {
    let field = config.field;
    let q = field.q();
    let grid = multiplicity_map(config);
    let triples: Vec<Point> = field
        .elements()
        .flat_map(|x| field.elements().map(move |y| Point::new(x, y)))
        .filter(|&p| grid.get(p) >= 3)
        .collect();
    let covering_slope = Slope::all(field).find(|&s| {
        let line = config.line(s);
        triples
            .iter()
            .all(|p| crate::geom::contains(field, &line, p))
    });
    let delta = covering_slope.map(|_| lines_without_triple_point(config, &grid).len());
    ConditionalCheck {
        covering_slope,
        triple_points: triples.len(),
        delta,
        excess: grid.excess(),
        max_multiplicity: grid.max(),
        q,
    }
}

/// Image under `(x, y) ↦ (x + e, y + f)`: `ℓ(m, b) ↦ ℓ(m, b + f - m·e)` and
/// `ℓ(∞, a) ↦ ℓ(∞, a + e)`.
pub fn translate<'f>(config: &LineConfig<'f>, e: Felt, f: Felt) -> LineConfig<'f> {
    let field = config.field;
    let q = field.q();
    let mut intercepts: Vec<Felt> = field
        .elements()
        .zip(&config.intercepts)
        .map(|(m, &b)| field.sub(field.add(b, f), field.mul(m, e)))
        .collect();
    intercepts.push(field.add(config.intercepts[q], e));
    LineConfig { field, intercepts }
}

/// The unique translate with `b_0 = 0` and `b_∞ = 0`.
pub fn normalize<'f>(config: &LineConfig<'f>) -> LineConfig<'f> {
    let field = config.field;
    let e = field.neg(config.intercepts[field.q()]);
    let f = field.neg(config.intercepts[0]);
    translate(config, e, f)
}

pub fn is_normalized(config: &LineConfig<'_>) -> bool {
    config.intercepts[0] == Felt::ZERO && config.intercepts[config.field.q()] == Felt::ZERO
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg<'f>(field: &'f FieldTable, idx: &[usize]) -> LineConfig<'f> {
        LineConfig::from_indices(field, idx).unwrap()
    }

    fn e(field: &FieldTable, i: usize) -> Felt {
        field.elem(i).unwrap()
    }

    /// Independent union count: membership of every plane point tested
    /// against every line equation.
    fn brute_cardinality(config: &LineConfig<'_>) -> u64 {
        let field = config.field();
        let mut n = 0;
        for x in field.elements() {
            for y in field.elements() {
                let p = Point::new(x, y);
                if config.lines().any(|l| crate::geom::contains(field, &l, &p)) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn zero_config_multiplicities() {
        let f3 = FieldTable::prime(3).unwrap();
        let grid = multiplicity_map(&LineConfig::zero(&f3));
        assert_eq!(grid.get(Point::new(Felt::ZERO, Felt::ZERO)), 4);
        assert_eq!(grid.counts().iter().filter(|&&m| m == 1).count(), 8);
        assert_eq!(grid.mass(), 12);
        let r = incidence_report(&LineConfig::zero(&f3)).unwrap();
        assert_eq!((r.cardinality, r.excess, r.lower_bound), (9, 3, 6));
    }

    #[test]
    fn b0_small_fields() {
        let f3 = FieldTable::prime(3).unwrap();
        let b0 = b0_config(&f3);
        assert_eq!(b0.indices(), vec![0, 2, 2, 0]);
        let grid = multiplicity_map(&b0);
        assert_eq!(grid.get(Point::new(e(&f3, 0), e(&f3, 2))), 3);
        assert_eq!(grid.max(), 3);
        let r = incidence_report(&b0).unwrap();
        assert_eq!((r.cardinality, r.excess), (7, 1));

        let f5 = FieldTable::prime(5).unwrap();
        assert_eq!(b0_config(&f5).indices(), vec![0, 4, 1, 1, 4, 0]);

        let f7 = FieldTable::prime(7).unwrap();
        assert_eq!(incidence_report(&b0_config(&f7)).unwrap().excess, 3);

        let gf4 = FieldTable::new(2, 2).unwrap();
        let r = incidence_report(&b0_config(&gf4)).unwrap();
        assert_eq!((r.cardinality, r.excess), (10, 0));
    }

    #[test]
    fn exceptions() {
        let f3 = FieldTable::prime(3).unwrap();
        assert_eq!(
            triple_point_exceptions(&b0_config(&f3)),
            vec![Slope::Finite(Felt::ZERO)]
        );
        assert!(triple_point_exceptions(&LineConfig::zero(&f3)).is_empty());
        let gf4 = FieldTable::new(2, 2).unwrap();
        assert_eq!(triple_point_exceptions(&b0_config(&gf4)).len(), 5);
    }

    #[test]
    fn conditional_b0_f5_is_equality_case() {
        let f5 = FieldTable::prime(5).unwrap();
        let c = conditional_check(&b0_config(&f5));
        assert_eq!(c.covering_slope, Some(Slope::Infinity));
        assert_eq!(c.triple_points, 2);
        assert_eq!(c.excess, 2);
        assert_eq!(c.bound_holds(), Some(true));
        assert!(c.is_equality_case() && c.equality_shape());
        assert_eq!(c.delta, Some(1));
    }

    #[test]
    fn conditional_ties_and_failures() {
        let f3 = FieldTable::prime(3).unwrap();
        let c = conditional_check(&LineConfig::zero(&f3));
        assert_eq!(c.covering_slope, Some(Slope::Finite(Felt::ZERO)));

        // two triple points would need 3 + 3 - 1 > 4 lines, so every q = 3
        // configuration has a covering line
        assert!(AllConfigs::new(&f3).all(|c| conditional_check(&c).covering_slope.is_some()));

        let f5 = FieldTable::prime(5).unwrap();
        let witness = AllConfigs::new(&f5)
            .find(|c| conditional_check(c).covering_slope.is_none())
            .expect("q = 5 has a configuration with uncovered triple points");
        let check = conditional_check(&witness);
        assert!(check.triple_points >= 2);
        assert_eq!(check.delta, None);
        assert_eq!(check.bound_holds(), None);
        // triple points (0,0), (2,2), (2,4); no configured line holds all three
        assert_eq!(witness.indices(), vec![0, 0, 0, 1, 1, 2]);
    }

    #[test]
    fn normalization() {
        let f3 = FieldTable::prime(3).unwrap();
        let b0 = b0_config(&f3);
        assert_eq!(normalize(&b0), b0);
        let c = cfg(&f3, &[1, 2, 2, 0]);
        assert_eq!(translate(&c, e(&f3, 0), e(&f3, 2)).indices(), vec![0, 1, 1, 0]);
        assert_eq!(normalize(&c).indices(), vec![0, 1, 1, 0]);
        let n = normalize(&c);
        assert_eq!(normalize(&n), n);
        assert_eq!(multiplicity_map(&n).histogram(), multiplicity_map(&c).histogram());
    }

    #[test]
    fn exhaustive_tiny_fields() {
        for q in [2u32, 3] {
            let field = FieldTable::with_order(q).unwrap();
            let mut count = 0;
            for c in AllConfigs::new(&field) {
                count += 1;
                let r = incidence_report(&c).unwrap();
                assert_eq!(r.cardinality, brute_cardinality(&c));
                assert_eq!(multiplicity_map(&c).mass(), (q * (q + 1)) as u64);
                let n = normalize(&c);
                assert!(is_normalized(&n));
                assert_eq!(incidence_report(&n).unwrap(), r);
            }
            assert_eq!(count, (q as usize).pow(q + 1));
        }
    }

    #[test]
    fn parse_and_display() {
        let f3 = FieldTable::prime(3).unwrap();
        let c = LineConfig::parse(&f3, "0, 2,2,0").unwrap();
        assert_eq!(c, b0_config(&f3));
        assert_eq!(c.to_string(), "0,2,2,0");
        assert!(matches!(
            LineConfig::parse(&f3, "0,2,2"),
            Err(BesicovitchError::WrongLength { expected: 4, got: 3, .. })
        ));
        assert!(matches!(
            LineConfig::parse(&f3, "0,2,x,0"),
            Err(BesicovitchError::Parse(_))
        ));
        assert!(matches!(
            LineConfig::parse(&f3, "0,2,3,0"),
            Err(BesicovitchError::Field(GfError::OutOfRange { idx: 3, q: 3 }))
        ));
    }

    #[test]
    fn pair_excess_values() {
        let v: Vec<u64> = (0..6).map(pair_excess).collect();
        assert_eq!(v, vec![0, 0, 0, 1, 3, 6]);
    }
}
