//! Exact convex hulls by the double description method over the integers.

use super::linalg::{adjugate, column_echelon, det, make_primitive_i128, narrow, IntVec};
use crate::error::{Error, Result};
use crate::numbers::Rational;

/// One inequality `<normal, x> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: IntVec,
    pub offset: i64,
}

impl Halfspace {
    pub fn slack(&self, x: &[i64]) -> i64 {
        super::linalg::dot(&self.normal, x) - self.offset
    }
}

struct Ray {
    v: Vec<i128>,
    zeros: Vec<u64>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn eval(row: &[i64], v: &[i128]) -> i128 {
    row.iter().zip(v).map(|(&a, &b)| a as i128 * b).sum()
}

/// Extreme rays of the pointed cone `{x : <row, x> >= 0 for all rows}`.
/// Fails if the rows do not have full rank.
pub(crate) fn extreme_rays(rows: &[IntVec], dim: usize) -> Result<Vec<IntVec>> {
    // greedy choice of `dim` independent rows
    let mut chosen: Vec<usize> = Vec::new();
    let mut picked: Vec<IntVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        picked.push(r.clone());
        if column_echelon(&picked, dim).rank == picked.len() {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        } else {
            picked.pop();
        }
    }
    if chosen.len() < dim {
        return Err(Error::Internal("cone is not pointed".into()));
    }
    let words = rows.len().div_ceil(64);
    let a0: Vec<IntVec> = chosen.iter().map(|&i| rows[i].clone()).collect();
    let d0 = det(&a0);
    let adj = adjugate(&a0);
    let sign = d0.signum();
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let mut v: Vec<i128> = (0..dim).map(|i| sign * adj[i][j]).collect();
            make_primitive_i128(&mut v);
            let mut zeros = vec![0u64; words];
            for (k, &ci) in chosen.iter().enumerate() {
                if k != j {
                    set_bit(&mut zeros, ci);
                }
            }
            Ray { v, zeros }
        })
        .collect();
    let mut processed = vec![0u64; words];
    for &ci in &chosen {
        set_bit(&mut processed, ci);
    }
    for (ri, row) in rows.iter().enumerate() {
        if bit(&processed, ri) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| eval(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[q].zeros)
                    .map(|(a, b)| a & b)
                    .collect();
                let cnt: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (cnt as usize) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (vals[p], vals[q]);
                let mut v: Vec<i128> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(&x, &y)| sp * x - sq * y)
                    .collect();
                make_primitive_i128(&mut v);
                let mut zeros = common;
                set_bit(&mut zeros, ri);
                fresh.push(Ray { v, zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k] == 0 {
                set_bit(&mut r.zeros, ri);
                next.push(r);
            } else if vals[k] > 0 {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
        set_bit(&mut processed, ri);
    }
    Ok(rays
        .into_iter()
        .map(|r| r.v.into_iter().map(narrow).collect())
        .collect())
}

/// Facets of the convex hull of a full-dimensional point set in `Z^d`,
/// `d >= 1`, with primitive normals, sorted.
pub(crate) fn facets_of_points(points: &[IntVec], d: usize) -> Result<Vec<Halfspace>> {
    let rows: Vec<IntVec> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(1);
            r
        })
        .collect();
    let rays = extreme_rays(&rows, d + 1)?;
    let mut out: Vec<Halfspace> = rays
        .into_iter()
        .map(|r| Halfspace {
            normal: r[..d].to_vec(),
            offset: -r[d],
        })
        .collect();
    if out.iter().any(|h| h.normal.iter().all(|&x| x == 0)) {
        return Err(Error::Internal("degenerate hull input".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Vertices of the polytope `{x in Q^d : <a_j, x> >= b_j}`. Fails if the
/// region is unbounded or lower dimensional in a way that leaves no vertex.
pub(crate) fn vertices_of_halfspaces(ineqs: &[Halfspace], d: usize) -> Result<Vec<Vec<Rational>>> {
    let mut rows: Vec<IntVec> = ineqs
        .iter()
        .map(|h| {
            let mut r = h.normal.clone();
            r.push(-h.offset);
            r
        })
        .collect();
    let mut t = vec![0; d + 1];
    t[d] = 1;
    rows.push(t);
    let rays = extreme_rays(&rows, d + 1)?;
    let mut out = Vec::new();
    for r in rays {
        let t = r[d];
        if t == 0 {
            return Err(Error::Internal("halfspace region is unbounded".into()));
        }
        out.push(r[..d].iter().map(|&x| Rational::new(x, t)).collect::<Vec<_>>());
    }
    out.sort();
    out.dedup();
    Ok(out)
}
