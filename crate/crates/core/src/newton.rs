//! Newton diagrams and their relative faces.
//!
//! A subset `F` of a finite point set `S` is a relative face when some face
//! of `conv(S)` meets `S` exactly in `F`. That holds iff there is a linear
//! functional `l` and a constant `c` with `l.w = c` on `F` and `l.w < c` on
//! `S \ F`. The functional is found with the exact LP in [`crate::lp`] and
//! stored with integer entries, so `l.w <= c - 1` off the face and the
//! check is pure integer arithmetic.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Form, MultiIndex, Rational};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::serde_util;

/// Default cap on `|S|` for [`enumerate_relative_faces`].
pub const FACE_ENUMERATION_LIMIT: usize = 20;

/// The set of exponents of a form's nonzero terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonDiagram {
    nvars: usize,
    points: BTreeSet<MultiIndex>,
}

impl NewtonDiagram {
    pub fn new(nvars: usize, points: impl IntoIterator<Item = MultiIndex>) -> Result<Self> {
        let points: BTreeSet<MultiIndex> = points.into_iter().collect();
        if let Some(w) = points.iter().find(|w| w.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: w.nvars(),
            });
        }
        Ok(NewtonDiagram { nvars, points })
    }

    /// The full dilated simplex `(Z_+^n)_d`.
    pub fn dilated_simplex(nvars: usize, degree: u32) -> Self {
        NewtonDiagram {
            nvars,
            points: dilated_simplex(nvars, degree).into_iter().collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn points(&self) -> &BTreeSet<MultiIndex> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Common total degree of the points, if they share one.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.points.iter().map(MultiIndex::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Whether the diagram is exactly `(Z_+^n)_d` for its degree `d`.
    pub fn is_dilated_simplex(&self) -> bool {
        match self.degree() {
            Some(d) => crate::form::simplex_size(self.nvars, d) == Some(self.len() as u128),
            None => false,
        }
    }
}

impl Form {
    pub fn support(&self) -> NewtonDiagram {
        NewtonDiagram {
            nvars: self.nvars(),
            points: self.support_points(),
        }
    }
}

/// All nonnegative integer vectors of length `n` and coordinate sum `d`, in
/// descending graded-lex order.
pub fn dilated_simplex(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(n, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Integer functional `normal . w <= offset`, tight exactly on a face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceWitness {
    #[serde(with = "serde_util::bigint_vec")]
    pub normal: Vec<BigInt>,
    #[serde(with = "serde_util::bigint")]
    pub offset: BigInt,
}

impl FaceWitness {
    pub fn value(&self, w: &MultiIndex) -> BigInt {
        self.normal
            .iter()
            .zip(w.exponents())
            .map(|(a, &x)| a * BigInt::from(x))
            .sum()
    }

    /// Exact integer check: equality on `face`, gap of at least one on the
    /// rest of `parent`.
    pub fn certifies(&self, parent: &BTreeSet<MultiIndex>, face: &BTreeSet<MultiIndex>) -> bool {
        if self.normal.len()
            != parent
                .iter()
                .next()
                .map_or(self.normal.len(), |w| w.nvars())
        {
            return false;
        }
        let limit = &self.offset - BigInt::one();
        parent.iter().all(|w| {
            let v = self.value(w);
            if face.contains(w) {
                v == self.offset
            } else {
                v <= limit
            }
        }) && face.is_subset(parent)
    }
}

/// A relative face of a Newton diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeFace {
    pub points: BTreeSet<MultiIndex>,
    pub witness: Option<FaceWitness>,
}

/// The face `F_J = {w in (Z_+^n)_d : w_j = 0 for j in J}` of a dilated simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexFace {
    /// Zero-based indices of the coordinates forced to vanish.
    pub zeroed: BTreeSet<usize>,
    pub face: RelativeFace,
}

fn scale_to_integers(values: &[Rational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

/// Decides whether `face` is a relative face of `diagram`; on success returns
/// an integer supporting functional.
pub fn is_relative_face(
    diagram: &NewtonDiagram,
    face: &BTreeSet<MultiIndex>,
) -> Result<Option<FaceWitness>> {
    if !face.is_subset(&diagram.points) {
        return Err(Error::NotASubset);
    }
    let n = diagram.nvars;
    if face.len() == diagram.len() {
        return Ok(Some(FaceWitness {
            normal: vec![BigInt::zero(); n],
            offset: BigInt::zero(),
        }));
    }
    if face.is_empty() {
        return Ok(Some(FaceWitness {
            normal: vec![BigInt::zero(); n],
            offset: BigInt::one(),
        }));
    }
    // Variables: normal (n, free), offset (free), gap t in [0, 1]. Maximize t.
    let mut lp = LinearProgram::new(n + 2);
    for j in 0..=n {
        lp.set_free(j);
    }
    let mut objective = vec![Rational::zero(); n + 2];
    objective[n + 1] = Rational::one();
    lp.maximize(objective);
    for w in &diagram.points {
        let mut row: Vec<Rational> = w
            .exponents()
            .iter()
            .map(|&x| Rational::from_integer(BigInt::from(x)))
            .collect();
        row.push(-Rational::one());
        if face.contains(w) {
            row.push(Rational::zero());
            lp.add_constraint(row, Relation::Eq, Rational::zero());
        } else {
            row.push(Rational::one());
            lp.add_constraint(row, Relation::Le, Rational::zero());
        }
    }
    let mut cap = vec![Rational::zero(); n + 2];
    cap[n + 1] = Rational::one();
    lp.add_constraint(cap, Relation::Le, Rational::one());

    match lp.solve() {
        LpOutcome::Optimal { point, value } if value.is_positive() => {
            let ints = scale_to_integers(&point[..=n]);
            let witness = FaceWitness {
                normal: ints[..n].to_vec(),
                offset: ints[n].clone(),
            };
            debug_assert!(witness.certifies(&diagram.points, face));
            Ok(Some(witness))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        other => unreachable!("gap LP is feasible and bounded, got {other:?}"),
    }
}

/// Row-echelon basis of the direction space of a point set, used to test
/// affine-hull membership.
struct AffineHull {
    origin: Vec<Rational>,
    basis: Vec<(usize, Vec<Rational>)>,
}

impl AffineHull {
    fn of<'a>(points: impl IntoIterator<Item = &'a MultiIndex>) -> Option<Self> {
        let mut it = points.into_iter();
        let origin = to_rational(it.next()?);
        let mut hull = AffineHull {
            origin,
            basis: Vec::new(),
        };
        for p in it {
            let mut v = hull.reduce(p);
            if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
                let lead = v[pivot].clone();
                for x in &mut v {
                    *x = &*x / &lead;
                }
                hull.basis.push((pivot, v));
            }
        }
        Some(hull)
    }

    fn reduce(&self, p: &MultiIndex) -> Vec<Rational> {
        let mut v: Vec<Rational> = to_rational(p)
            .into_iter()
            .zip(&self.origin)
            .map(|(a, b)| a - b)
            .collect();
        for (pivot, row) in &self.basis {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &f * r;
            }
        }
        v
    }

    fn contains(&self, p: &MultiIndex) -> bool {
        self.reduce(p).iter().all(Zero::is_zero)
    }
}

fn to_rational(w: &MultiIndex) -> Vec<Rational> {
    w.exponents()
        .iter()
        .map(|&x| Rational::from_integer(BigInt::from(x)))
        .collect()
}

/// All relative faces of `diagram`, including the empty and improper faces,
/// each with a witness. Sorted by size, then by points.
///
/// Candidates are the flats of `S`, subsets `F` with `S ∩ aff(F) = F`; only
/// those reach the LP.
pub fn enumerate_relative_faces(diagram: &NewtonDiagram) -> Result<Vec<RelativeFace>> {
    enumerate_relative_faces_with_limit(diagram, FACE_ENUMERATION_LIMIT)
}

pub fn enumerate_relative_faces_with_limit(
    diagram: &NewtonDiagram,
    limit: usize,
) -> Result<Vec<RelativeFace>> {
    let size = diagram.len();
    if size > limit || size >= 64 {
        return Err(Error::EnumerationBudget { size, limit });
    }
    let points: Vec<&MultiIndex> = diagram.points.iter().collect();
    let closure = |mask: u64| -> u64 {
        let Some(hull) =
            AffineHull::of((0..size).filter(|i| mask >> i & 1 == 1).map(|i| points[i]))
        else {
            return 0;
        };
        (0..size)
            .filter(|&i| mask >> i & 1 == 1 || hull.contains(points[i]))
            .fold(0, |acc, i| acc | 1 << i)
    };
    // Flats grow one point at a time: every flat is the closure of a smaller
    // flat plus one point.
    let mut flats: BTreeSet<u64> = BTreeSet::from([0]);
    let mut pending = vec![0u64];
    while let Some(flat) = pending.pop() {
        for i in 0..size {
            if flat >> i & 1 == 0 {
                let grown = closure(flat | 1 << i);
                if flats.insert(grown) {
                    pending.push(grown);
                }
            }
        }
    }
    let mut faces = Vec::new();
    for mask in flats {
        let chosen: BTreeSet<MultiIndex> = (0..size)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| points[i].clone())
            .collect();
        if let Some(witness) = is_relative_face(diagram, &chosen)? {
            faces.push(RelativeFace {
                points: chosen,
                witness: Some(witness),
            });
        }
    }
    faces.sort_by(|a, b| {
        a.points
            .len()
            .cmp(&b.points.len())
            .then_with(|| a.points.iter().cmp(b.points.iter()))
    });
    Ok(faces)
}

/// The faces `F_J` of `(Z_+^n)_d` for every `J` in `[n]`, in order of the
/// bitmask of `J`. The witness is `-1_J . w <= 0`.
pub fn simplex_faces(n: usize, d: u32) -> Vec<SimplexFace> {
    let all = dilated_simplex(n, d);
    (0u64..(1u64 << n))
        .map(|mask| {
            let zeroed: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            simplex_face(&all, n, zeroed)
        })
        .collect()
}

/// The single face `F_J` of `(Z_+^n)_d`.
pub fn simplex_face_for(n: usize, d: u32, zeroed: BTreeSet<usize>) -> SimplexFace {
    simplex_face(&dilated_simplex(n, d), n, zeroed)
}

fn simplex_face(all: &[MultiIndex], n: usize, zeroed: BTreeSet<usize>) -> SimplexFace {
    let points = all
        .iter()
        .filter(|w| zeroed.iter().all(|&j| w.get(j) == 0))
        .cloned()
        .collect::<BTreeSet<_>>();
    let witness = if points.is_empty() {
        FaceWitness {
            normal: vec![BigInt::zero(); n],
            offset: BigInt::one(),
        }
    } else {
        FaceWitness {
            normal: (0..n)
                .map(|i| {
                    if zeroed.contains(&i) {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect(),
            offset: BigInt::zero(),
        }
    };
    SimplexFace {
        zeroed,
        face: RelativeFace {
            points,
            witness: Some(witness),
        },
    }
}
