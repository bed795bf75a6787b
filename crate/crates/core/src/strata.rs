//! Strata of a support set with respect to a relative face, and dominance.
//!
//! For a face `F` of `Log(p)` and a finite set `S`, a stratum is a nonempty
//! `E ⊆ S` that fits inside some translate `kF + z` of a dilate of `F`, and
//! such that every translate containing `E` meets `S` in exactly `E`. A
//! stratum is dominant when no translate `k Log(p) + z` that contains `E`
//! but misses it on `kF + z` has `(kF + z) ∩ S` nonempty.
//!
//! Both conditions quantify over every `k >= 1`. The generic routines here
//! search `k <= k_max` only and say so in their output. When `Log(p)` and
//! `S` are full dilated simplices the answer is known in closed form: the
//! strata for `F_J` are the slices `E_{J,beta} = {w in S : w_J = beta}`, and
//! exactly the `beta = 0` slice is dominant.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::MultiIndex;
use crate::newton::{dilated_simplex, NewtonDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    Yes,
    No,
    UnknownAtBound,
}

/// A translate `kF + z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    pub k: u32,
    pub shift: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub points: BTreeSet<MultiIndex>,
    pub dominance: Dominance,
    /// Translates `kF + z` that contain the stratum.
    pub placements: Vec<Placement>,
    /// A translate violating dominance, present when `dominance` is `No`.
    pub violation: Option<Placement>,
    /// The `k` bound the search used; `None` for closed-form results.
    pub k_max: Option<u32>,
}

/// A closed-form stratum `E_{J,beta}` of a dilated simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexStratum {
    pub beta: Vec<u32>,
    pub stratum: Stratum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumBounds {
    pub k_max: u32,
}

impl StratumBounds {
    /// `ceil(e / d) + 2`: enough for every slice to fit in one translate.
    pub fn default_for(face_degree: u32, ambient_degree: u32) -> Self {
        StratumBounds {
            k_max: ambient_degree.div_ceil(face_degree.max(1)) + 2,
        }
    }
}

fn to_i64(w: &MultiIndex) -> Vec<i64> {
    w.exponents().iter().map(|&x| x as i64).collect()
}

/// The dilates `F, 2F, 3F, ...` of a point set, built by repeated Minkowski
/// addition and cached.
#[derive(Clone, Debug)]
pub struct MinkowskiPowers {
    base: Vec<Vec<i64>>,
    sums: Vec<HashSet<Vec<i64>>>,
}

impl MinkowskiPowers {
    pub fn new<'a>(points: impl IntoIterator<Item = &'a MultiIndex>) -> Self {
        let base: Vec<Vec<i64>> = points.into_iter().map(to_i64).collect();
        let first = base.iter().cloned().collect();
        MinkowskiPowers {
            base,
            sums: vec![first],
        }
    }

    /// `kF` for `k >= 1`.
    pub fn dilate(&mut self, k: u32) -> &HashSet<Vec<i64>> {
        assert!(k >= 1, "dilates start at k = 1");
        while self.sums.len() < k as usize {
            let prev = self.sums.last().expect("nonempty");
            let mut next = HashSet::with_capacity(prev.len() * 2);
            for a in prev {
                for b in &self.base {
                    next.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>());
                }
            }
            self.sums.push(next);
        }
        &self.sums[k as usize - 1]
    }

    /// Whether `w ∈ kF + z`.
    pub fn covers(&mut self, k: u32, shift: &[i64], w: &MultiIndex) -> bool {
        let diff: Vec<i64> = w
            .exponents()
            .iter()
            .zip(shift)
            .map(|(&x, z)| x as i64 - z)
            .collect();
        if diff.iter().any(|&x| x < 0) {
            return false;
        }
        self.dilate(k).contains(&diff)
    }
}

/// Calls `visit` on every integer vector with `lo[i] <= z[i] <= hi[i]` and
/// coordinate sum `total`.
fn for_each_shift(lo: &[i64], hi: &[i64], total: i64, visit: &mut dyn FnMut(&[i64])) {
    struct Walk<'a> {
        lo: &'a [i64],
        hi: &'a [i64],
        suffix_lo: Vec<i64>,
        suffix_hi: Vec<i64>,
        cur: Vec<i64>,
    }

    fn rec(w: &mut Walk<'_>, i: usize, left: i64, visit: &mut dyn FnMut(&[i64])) {
        if i == w.lo.len() {
            if left == 0 {
                visit(&w.cur);
            }
            return;
        }
        let from = w.lo[i].max(left - w.suffix_hi[i + 1]);
        let to = w.hi[i].min(left - w.suffix_lo[i + 1]);
        for v in from..=to {
            w.cur.push(v);
            rec(w, i + 1, left - v, visit);
            w.cur.pop();
        }
    }

    let n = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut suffix_lo = vec![0; n + 1];
    let mut suffix_hi = vec![0; n + 1];
    for i in (0..n).rev() {
        suffix_lo[i] = suffix_lo[i + 1] + lo[i];
        suffix_hi[i] = suffix_hi[i + 1] + hi[i];
    }
    let mut walk = Walk {
        lo,
        hi,
        suffix_lo,
        suffix_hi,
        cur: Vec::with_capacity(n),
    };
    rec(&mut walk, 0, total, visit);
}

fn coord_range<'a>(
    points: impl IntoIterator<Item = &'a MultiIndex>,
    n: usize,
) -> (Vec<i64>, Vec<i64>) {
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for w in points {
        for i in 0..n {
            let x = w.get(i) as i64;
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    (lo, hi)
}

fn homogeneous_degree(points: &BTreeSet<MultiIndex>) -> Result<u32> {
    let mut it = points.iter().map(MultiIndex::degree);
    let d = it.next().ok_or(Error::EmptyFace)?;
    if let Some(other) = it.find(|&e| e != d) {
        return Err(Error::Inhomogeneous {
            degrees: vec![d.min(other), d.max(other)],
        });
    }
    Ok(d)
}

/// Strata `E_{J,beta}` of `S = (Z_+^n)_e` with respect to the face `F_J` of
/// `(Z_+^n)_d`, with dominance from the closed form (`beta = 0`).
pub fn closed_form_strata(
    n: usize,
    d: u32,
    e: u32,
    zeroed: &BTreeSet<usize>,
) -> Result<Vec<SimplexStratum>> {
    if n == 0 {
        return Err(Error::NoVariables);
    }
    if zeroed.len() >= n {
        return Err(Error::EmptyFace);
    }
    if let Some(&j) = zeroed.iter().find(|&&j| j >= n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: j + 1,
        });
    }
    let ambient = dilated_simplex(n, e);
    let free = (0..n).find(|i| !zeroed.contains(i)).expect("J is proper");
    let l = e.div_ceil(d.max(1)).max(1);
    let mut out = Vec::new();
    for total in 0..=e {
        for beta in dilated_simplex_or_empty(zeroed.len(), total) {
            let points: BTreeSet<MultiIndex> = ambient
                .iter()
                .filter(|w| zeroed.iter().zip(&beta).all(|(&j, &b)| w.get(j) == b))
                .cloned()
                .collect();
            if points.is_empty() {
                continue;
            }
            let mut shift = vec![0i64; n];
            for (&j, &b) in zeroed.iter().zip(&beta) {
                shift[j] = b as i64;
            }
            shift[free] += e as i64 - (l * d) as i64 - total as i64;
            let dominant = zeroed.is_empty() || total == 0;
            let violation = (!dominant).then(|| slice_violation(n, d, e, zeroed));
            out.push(SimplexStratum {
                beta,
                stratum: Stratum {
                    points,
                    dominance: if dominant {
                        Dominance::Yes
                    } else {
                        Dominance::No
                    },
                    placements: vec![Placement { k: l, shift }],
                    violation,
                    k_max: None,
                },
            });
        }
    }
    Ok(out)
}

fn dilated_simplex_or_empty(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    dilated_simplex(n, d)
        .into_iter()
        .map(MultiIndex::into_inner)
        .collect()
}

/// The translate `k Log(p) + z` with `z_J = 0` and the rest of `z` pushed to
/// one free coordinate; it contains every slice with `beta != 0` while its
/// `F_J` part meets `S` in `E_{J,0}`.
fn slice_violation(n: usize, d: u32, e: u32, zeroed: &BTreeSet<usize>) -> Placement {
    let k = e.div_ceil(d.max(1)).max(1);
    let free = (0..n).find(|i| !zeroed.contains(i)).expect("J is proper");
    let mut shift = vec![0i64; n];
    shift[free] = e as i64 - (k * d) as i64;
    Placement { k, shift }
}

/// Every stratum of `ambient` with respect to `face` (a relative face of
/// `logp`) that is visible with dilates `k <= bounds.k_max`, with dominance.
pub fn enumerate_strata_bounded(
    ambient: &NewtonDiagram,
    logp: &NewtonDiagram,
    face: &BTreeSet<MultiIndex>,
    bounds: StratumBounds,
) -> Result<Vec<Stratum>> {
    let n = ambient.nvars();
    let d = homogeneous_degree(face)?;
    let e = homogeneous_degree(ambient.points())?;
    if face.iter().any(|w| w.nvars() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: face.iter().next().map_or(0, MultiIndex::nvars),
        });
    }
    let mut dilates = MinkowskiPowers::new(face);
    let (s_lo, s_hi) = coord_range(ambient.points(), n);
    let (f_lo, f_hi) = coord_range(face, n);

    let mut hits: BTreeMap<BTreeSet<MultiIndex>, Vec<Placement>> = BTreeMap::new();
    for k in 1..=bounds.k_max {
        let ki = k as i64;
        let lo: Vec<i64> = (0..n).map(|i| s_lo[i] - ki * f_hi[i]).collect();
        let hi: Vec<i64> = (0..n).map(|i| s_hi[i] - ki * f_lo[i]).collect();
        let total = e as i64 - ki * d as i64;
        let mut shifts = Vec::new();
        for_each_shift(&lo, &hi, total, &mut |z| shifts.push(z.to_vec()));
        for shift in shifts {
            let hit: BTreeSet<MultiIndex> = ambient
                .points()
                .iter()
                .filter(|w| dilates.covers(k, &shift, w))
                .cloned()
                .collect();
            if !hit.is_empty() {
                hits.entry(hit).or_default().push(Placement { k, shift });
            }
        }
    }

    let candidates: Vec<&BTreeSet<MultiIndex>> = hits.keys().collect();
    let mut out = Vec::new();
    for (set, placements) in &hits {
        let maximal = !candidates
            .iter()
            .any(|other| other.len() > set.len() && set.is_subset(other));
        if !maximal {
            continue;
        }
        let (dominance, violation) = is_dominant_bounded(set, ambient, logp, face, bounds);
        out.push(Stratum {
            points: set.clone(),
            dominance,
            placements: placements.clone(),
            violation,
            k_max: Some(bounds.k_max),
        });
    }
    Ok(out)
}

/// Searches `k <= k_max` for a translate violating dominance of `stratum`.
///
/// Returns `No` with the violating translate when one is found, `Yes` when
/// none exists and dominance is settled anyway (the improper face, or full
/// dilated simplices), and `UnknownAtBound` otherwise.
pub fn is_dominant_bounded(
    stratum: &BTreeSet<MultiIndex>,
    ambient: &NewtonDiagram,
    logp: &NewtonDiagram,
    face: &BTreeSet<MultiIndex>,
    bounds: StratumBounds,
) -> (Dominance, Option<Placement>) {
    let n = ambient.nvars();
    if stratum.is_empty() || face.is_empty() {
        return (Dominance::UnknownAtBound, None);
    }
    let improper = face == logp.points();
    if !improper {
        if let Some(v) = find_violation(stratum, ambient, logp, face, bounds.k_max) {
            return (Dominance::No, Some(v));
        }
    }
    if improper {
        return (Dominance::Yes, None);
    }
    let (Some(d), Some(e)) = (logp.degree(), ambient.degree()) else {
        return (Dominance::UnknownAtBound, None);
    };
    if logp.is_dilated_simplex() && ambient.is_dilated_simplex() {
        let zeroed: BTreeSet<usize> = (0..n)
            .filter(|&i| face.iter().all(|w| w.get(i) == 0))
            .collect();
        let sample = stratum.iter().next().expect("nonempty");
        if zeroed.iter().all(|&j| sample.get(j) == 0) {
            return (Dominance::Yes, None);
        }
        return (Dominance::No, Some(slice_violation(n, d, e, &zeroed)));
    }
    (Dominance::UnknownAtBound, None)
}

fn find_violation(
    stratum: &BTreeSet<MultiIndex>,
    ambient: &NewtonDiagram,
    logp: &NewtonDiagram,
    face: &BTreeSet<MultiIndex>,
    k_max: u32,
) -> Option<Placement> {
    let n = ambient.nvars();
    let d = homogeneous_degree(logp.points()).ok()? as i64;
    let e = homogeneous_degree(stratum).ok()? as i64;
    let mut whole = MinkowskiPowers::new(logp.points());
    let mut part = MinkowskiPowers::new(face);
    let (e_lo, e_hi) = coord_range(stratum, n);
    let (p_lo, p_hi) = coord_range(logp.points(), n);
    for k in 1..=k_max {
        let ki = k as i64;
        let lo: Vec<i64> = (0..n).map(|i| e_hi[i] - ki * p_hi[i]).collect();
        let hi: Vec<i64> = (0..n).map(|i| e_lo[i] - ki * p_lo[i]).collect();
        let mut shifts = Vec::new();
        for_each_shift(&lo, &hi, e - ki * d, &mut |z| shifts.push(z.to_vec()));
        for shift in shifts {
            let placement = Placement { k, shift };
            if violates(stratum, ambient, &mut whole, &mut part, &placement) {
                return Some(placement);
            }
        }
    }
    None
}

fn violates(
    stratum: &BTreeSet<MultiIndex>,
    ambient: &NewtonDiagram,
    whole: &mut MinkowskiPowers,
    part: &mut MinkowskiPowers,
    pl: &Placement,
) -> bool {
    stratum.iter().all(|w| whole.covers(pl.k, &pl.shift, w))
        && !stratum.iter().any(|w| part.covers(pl.k, &pl.shift, w))
        && ambient
            .points()
            .iter()
            .any(|w| part.covers(pl.k, &pl.shift, w))
}

/// Re-checks that `placement` violates dominance of `stratum`.
pub fn is_violation(
    stratum: &BTreeSet<MultiIndex>,
    ambient: &NewtonDiagram,
    logp: &NewtonDiagram,
    face: &BTreeSet<MultiIndex>,
    placement: &Placement,
) -> bool {
    let mut whole = MinkowskiPowers::new(logp.points());
    let mut part = MinkowskiPowers::new(face);
    violates(stratum, ambient, &mut whole, &mut part, placement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::simplex_face_for;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn set(ps: &[&[u32]]) -> BTreeSet<MultiIndex> {
        ps.iter().map(|p| mi(p)).collect()
    }

    #[test]
    fn binary_linear_face_slices() {
        let strata = closed_form_strata(2, 1, 2, &BTreeSet::from([1])).unwrap();
        let got: Vec<(Vec<u32>, BTreeSet<MultiIndex>, Dominance)> = strata
            .into_iter()
            .map(|s| (s.beta, s.stratum.points, s.stratum.dominance))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![0], set(&[&[2, 0]]), Dominance::Yes),
                (vec![1], set(&[&[1, 1]]), Dominance::No),
                (vec![2], set(&[&[0, 2]]), Dominance::No),
            ]
        );
    }

    #[test]
    fn improper_face_has_one_dominant_stratum() {
        let strata = closed_form_strata(2, 1, 2, &BTreeSet::new()).unwrap();
        assert_eq!(strata.len(), 1);
        assert_eq!(
            strata[0].stratum.points,
            NewtonDiagram::dilated_simplex(2, 2).points().clone()
        );
        assert_eq!(strata[0].stratum.dominance, Dominance::Yes);
    }

    #[test]
    fn ternary_quadratic_slices() {
        let strata = closed_form_strata(3, 2, 2, &BTreeSet::from([2])).unwrap();
        let pts: Vec<_> = strata.iter().map(|s| s.stratum.points.clone()).collect();
        assert_eq!(
            pts,
            vec![
                set(&[&[2, 0, 0], &[1, 1, 0], &[0, 2, 0]]),
                set(&[&[1, 0, 1], &[0, 1, 1]]),
                set(&[&[0, 0, 2]]),
            ]
        );
        assert_eq!(strata[0].stratum.dominance, Dominance::Yes);
        assert_eq!(strata[1].stratum.dominance, Dominance::No);
    }

    #[test]
    fn full_face_set_is_rejected() {
        assert_eq!(
            closed_form_strata(2, 1, 2, &BTreeSet::from([0, 1])),
            Err(Error::EmptyFace)
        );
    }

    #[test]
    fn bounded_matches_closed_form_small() {
        let s = NewtonDiagram::dilated_simplex(2, 2);
        let logp = NewtonDiagram::dilated_simplex(2, 1);
        let face = simplex_face_for(2, 1, BTreeSet::from([1])).face.points;
        let strata =
            enumerate_strata_bounded(&s, &logp, &face, StratumBounds { k_max: 4 }).unwrap();
        let got: BTreeSet<_> = strata
            .iter()
            .map(|s| (s.points.clone(), s.dominance))
            .collect();
        let want: BTreeSet<_> = closed_form_strata(2, 1, 2, &BTreeSet::from([1]))
            .unwrap()
            .into_iter()
            .map(|s| (s.stratum.points, s.stratum.dominance))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn gappy_cubes_single_stratum() {
        let s = NewtonDiagram::new(2, set(&[&[3, 0], &[0, 3]])).unwrap();
        let logp = NewtonDiagram::dilated_simplex(2, 1);
        let strata =
            enumerate_strata_bounded(&s, &logp, logp.points(), StratumBounds { k_max: 5 }).unwrap();
        assert_eq!(strata.len(), 1);
        assert_eq!(&strata[0].points, s.points());
        assert_eq!(strata[0].dominance, Dominance::Yes);
    }

    #[test]
    fn single_point_face_gives_singletons() {
        let s = NewtonDiagram::dilated_simplex(3, 2);
        let logp = NewtonDiagram::dilated_simplex(3, 1);
        let face = set(&[&[0, 1, 0]]);
        let strata =
            enumerate_strata_bounded(&s, &logp, &face, StratumBounds { k_max: 3 }).unwrap();
        assert_eq!(strata.len(), s.len());
        assert!(strata.iter().all(|st| st.points.len() == 1));
    }

    #[test]
    fn violations_recheck() {
        let s = NewtonDiagram::dilated_simplex(3, 3);
        let logp = NewtonDiagram::dilated_simplex(3, 2);
        let zeroed = BTreeSet::from([0]);
        let face = simplex_face_for(3, 2, zeroed.clone()).face.points;
        for st in closed_form_strata(3, 2, 3, &zeroed).unwrap() {
            match st.stratum.dominance {
                Dominance::No => {
                    let v = st.stratum.violation.as_ref().unwrap();
                    assert!(is_violation(&st.stratum.points, &s, &logp, &face, v));
                }
                _ => assert!(st.stratum.violation.is_none()),
            }
        }
    }

    #[test]
    fn small_bound_still_decides_lemma_case() {
        let s = NewtonDiagram::dilated_simplex(2, 4);
        let logp = NewtonDiagram::dilated_simplex(2, 1);
        let face = set(&[&[1, 0]]);
        let (dom, v) = is_dominant_bounded(
            &set(&[&[3, 1]]),
            &s,
            &logp,
            &face,
            StratumBounds { k_max: 1 },
        );
        assert_eq!(dom, Dominance::No);
        assert!(is_violation(
            &set(&[&[3, 1]]),
            &s,
            &logp,
            &face,
            &v.unwrap()
        ));
    }

    #[test]
    fn shifts_respect_box_and_sum() {
        let mut seen = Vec::new();
        for_each_shift(&[-1, 0], &[1, 2], 1, &mut |z| seen.push(z.to_vec()));
        assert_eq!(seen, vec![vec![-1, 2], vec![0, 1], vec![1, 0]]);
    }
}
