//! Exact offsetting of arc-gon boundaries to the left by a distance `r`.
//!
//! Candidates (shifted segments, concentric arcs, vertex arcs at corners)
//! are split at their mutual intersections; a sub-piece is kept when its
//! midpoint is at distance `r` from the original boundary and on its left.
//! The kept pieces are stitched back into closed loops.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::index::BoundaryIndex;
use super::point::{BBox, Point};
use super::prim::{intersect, Prim};
use crate::error::{Error, Result};

const TURN_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
struct Piece {
    prim: Prim,
    source: usize,
}

pub(crate) struct Tolerances {
    /// absolute length tolerance for intersections/endpoint tests
    pub len: f64,
    /// node merge distance
    pub node: f64,
    /// slack on the distance-validity test
    pub valid: f64,
    /// largest gap closed between a dangling end and a dangling start
    pub bridge: f64,
}

impl Tolerances {
    pub fn for_scale(scale: f64) -> Self {
        let s = scale.max(1e-300);
        Tolerances { len: 1e-10 * s, node: 1e-8 * s, valid: 1e-12 * s, bridge: 1e-6 * s }
    }
}

fn candidates(loops: &[Vec<Prim>], r: f64, tol: &Tolerances) -> Vec<Piece> {
    let mut out = Vec::new();
    for lp in loops {
        let n = lp.len();
        for i in 0..n {
            let pr = &lp[i];
            match *pr {
                Prim::Seg { a, b } => {
                    let nrm = (b - a).normalized().perp() * r;
                    out.push(Piece { prim: Prim::Seg { a: a + nrm, b: b + nrm }, source: out.len() });
                }
                Prim::Arc { c, r: rad, a0, sw, .. } => {
                    let new_r = if sw > 0.0 { rad - r } else { rad + r };
                    if new_r > tol.len {
                        out.push(Piece { prim: Prim::arc(c, new_r, a0, sw), source: out.len() });
                    } else if new_r < -tol.len {
                        // the erosion boundary there is made of the discs
                        // about the collapsed arc's end points, over its
                        // normal range, clockwise (disc on the right)
                        for q in [pr.start(), pr.end()] {
                            out.push(Piece { prim: Prim::arc(q, r, a0 + PI + sw, -sw), source: out.len() });
                        }
                    }
                }
            }
            // vertex between lp[i] and lp[i+1]
            let nx = &lp[(i + 1) % n];
            let t_in = pr.tangent_at(1.0);
            let t_out = nx.tangent_at(0.0);
            let turn = t_in.cross(t_out).atan2(t_in.dot(t_out));
            // disc about the vertex over its normal cone, clockwise; at left
            // turns it only matters once the adjacent arcs have collapsed
            if turn.abs() > TURN_EPS {
                let v = pr.end();
                let a = v + t_in.perp() * r;
                let b = v + t_out.perp() * r;
                let prim = if turn < 0.0 { Prim::arc_between(v, r, a, b, turn) } else { Prim::arc_between(v, r, b, a, -turn) };
                out.push(Piece { prim, source: out.len() });
            }
        }
    }
    out
}

fn split_all(pieces: &[Piece], tol: &Tolerances) -> Vec<Piece> {
    let boxes: Vec<BBox> = pieces.iter().map(|p| p.prim.bbox().expanded(tol.len)).collect();
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x));
    // sweep and prune over x, collecting candidate pairs
    let pairs: Vec<(usize, usize)> = (0..order.len())
        .into_par_iter()
        .flat_map_iter(|oi| {
            let i = order[oi];
            let bi = boxes[i];
            let mut v = Vec::new();
            for &j in &order[oi + 1..] {
                if boxes[j].min.x > bi.max.x {
                    break;
                }
                if bi.overlaps(&boxes[j]) {
                    v.push((i.min(j), i.max(j)));
                }
            }
            v.into_iter()
        })
        .collect();
    let hits: Vec<(usize, usize, f64, f64)> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let mut buf = Vec::new();
            let (pa, pb) = (&pieces[i].prim, &pieces[j].prim);
            intersect(pa, pb, tol.len, &mut buf);
            let la = pa.length();
            let lb = pb.length();
            let near = |t: f64, l: f64| t * l <= tol.len || (1.0 - t) * l <= tol.len;
            buf.into_iter()
                .filter(move |&(ta, tb)| !(near(ta, la) && near(tb, lb)))
                .map(move |(ta, tb)| (i, j, ta, tb))
                .collect::<Vec<_>>()
                .into_iter()
        })
        .collect();
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); pieces.len()];
    for (i, j, ta, tb) in hits {
        cuts[i].push(ta);
        cuts[j].push(tb);
    }
    let mut out = Vec::with_capacity(pieces.len() * 2);
    for (i, pc) in pieces.iter().enumerate() {
        let len = pc.prim.length();
        let c = &mut cuts[i];
        c.retain(|&t| t * len > tol.len && (1.0 - t) * len > tol.len);
        c.sort_by(f64::total_cmp);
        c.dedup_by(|a, b| (*a - *b) * len <= tol.len);
        let mut t0 = 0.0;
        let mut q0 = pc.prim.start();
        for &t in c.iter() {
            let q = pc.prim.point_at(t);
            out.push(Piece { prim: pc.prim.sub(t0, t, q0, q), source: pc.source });
            t0 = t;
            q0 = q;
        }
        out.push(Piece { prim: pc.prim.sub(t0, 1.0, q0, pc.prim.end()), source: pc.source });
    }
    out
}

struct Graph {
    nodes: Vec<Point>,
    // per edge: (from, to)
    ends: Vec<(usize, usize)>,
}

fn cluster_nodes(pieces: &[Piece], eps: f64) -> Graph {
    let mut nodes: Vec<Point> = Vec::new();
    let mut hash: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let key = |p: Point| ((p.x / eps).floor() as i64, (p.y / eps).floor() as i64);
    let mut find_or_add = |p: Point, nodes: &mut Vec<Point>| -> usize {
        let (kx, ky) = key(p);
        let mut best: Option<(f64, usize)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(v) = hash.get(&(kx + dx, ky + dy)) {
                    for &id in v {
                        let d = nodes[id].dist(p);
                        if d <= eps && best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, id));
                        }
                    }
                }
            }
        }
        if let Some((_, id)) = best {
            return id;
        }
        nodes.push(p);
        let id = nodes.len() - 1;
        hash.entry((kx, ky)).or_default().push(id);
        id
    };
    let mut ends = Vec::with_capacity(pieces.len());
    for pc in pieces {
        let a = find_or_add(pc.prim.start(), &mut nodes);
        let b = find_or_add(pc.prim.end(), &mut nodes);
        ends.push((a, b));
    }
    Graph { nodes, ends }
}

/// Offsets the closed loops to their left by `r` and returns the stitched
/// result loops. Loops are oriented with the offset region on their left.
pub(crate) fn offset_left(loops: &[Vec<Prim>], r: f64, tol: &Tolerances) -> Result<Vec<Vec<Prim>>> {
    let cands = candidates(loops, r, tol);
    if cands.is_empty() {
        return Ok(Vec::new());
    }
    let split = split_all(&cands, tol);
    let index = BoundaryIndex::new(loops, r * 1.5 + tol.node);
    let keep: Vec<bool> = split
        .par_iter()
        .map(|pc| {
            let m = pc.prim.point_at(0.5);
            index.nearest_unless_closer(m, r - tol.valid).is_some_and(|nr| index.left_at(m, &nr, tol.len))
        })
        .collect();
    let valid: Vec<Piece> = split.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    stitch(&valid, tol)
}

fn stitch(pieces: &[Piece], tol: &Tolerances) -> Result<Vec<Vec<Prim>>> {
    let g = cluster_nodes(pieces, tol.node);
    let mut alive: Vec<bool> = g.ends.iter().map(|&(a, b)| a != b).collect();
    // drop exact duplicates (same endpoints, same carrier)
    {
        let mut seen: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (e, &(a, b)) in g.ends.iter().enumerate() {
            if !alive[e] {
                continue;
            }
            let m = pieces[e].prim.point_at(0.5);
            let list = seen.entry((a, b)).or_default();
            if list.iter().any(|&o| pieces[o].prim.point_at(0.5).dist(m) <= tol.node) {
                alive[e] = false;
            } else {
                list.push(e);
            }
        }
    }
    let bridges = bridge_gaps(&g, &alive, tol.bridge);
    if bridges.is_empty() {
        return trace(pieces, &g, alive, tol);
    }
    let mut pieces = pieces.to_vec();
    let mut g = g;
    let next_source = pieces.iter().map(|p| p.source).max().unwrap_or(0) + 1;
    for (i, (a, b)) in bridges.into_iter().enumerate() {
        pieces.push(Piece { prim: Prim::Seg { a: g.nodes[a], b: g.nodes[b] }, source: next_source + i });
        g.ends.push((a, b));
        alive.push(true);
    }
    trace(&pieces, &g, alive, tol)
}

/// Joins nodes with surplus incoming pieces to the nearest nodes with
/// surplus outgoing pieces, when they are at most `max_gap` apart. Such gaps
/// come from near-tangent crossings resolved differently on the two sides.
fn bridge_gaps(g: &Graph, alive: &[bool], max_gap: f64) -> Vec<(usize, usize)> {
    let nn = g.nodes.len();
    let mut surplus = vec![0i64; nn];
    for (e, &(a, b)) in g.ends.iter().enumerate() {
        if alive[e] {
            surplus[a] -= 1;
            surplus[b] += 1;
        }
    }
    let sinks: Vec<usize> = (0..nn).filter(|&v| surplus[v] > 0).collect();
    let sources: Vec<usize> = (0..nn).filter(|&v| surplus[v] < 0).collect();
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for &a in &sinks {
        for &b in &sources {
            let d = g.nodes[a].dist(g.nodes[b]);
            if d <= max_gap {
                cand.push((d, a, b));
            }
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::new();
    for (_, a, b) in cand {
        while surplus[a] > 0 && surplus[b] < 0 {
            surplus[a] -= 1;
            surplus[b] += 1;
            out.push((a, b));
        }
    }
    out
}

fn trace(pieces: &[Piece], g: &Graph, mut alive: Vec<bool>, tol: &Tolerances) -> Result<Vec<Vec<Prim>>> {
    let nn = g.nodes.len();
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); nn];
    let mut indeg = vec![0usize; nn];
    let mut outdeg = vec![0usize; nn];
    for (e, &(a, b)) in g.ends.iter().enumerate() {
        if alive[e] {
            outs[a].push(e);
            outdeg[a] += 1;
            indeg[b] += 1;
        }
    }
    // prune dangling pieces
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); nn];
    for (e, &(_, b)) in g.ends.iter().enumerate() {
        if alive[e] {
            ins[b].push(e);
        }
    }
    let mut stack: Vec<usize> = (0..nn).filter(|&v| (indeg[v] == 0) != (outdeg[v] == 0)).collect();
    while let Some(v) = stack.pop() {
        let dead: Vec<usize> = if indeg[v] == 0 {
            outs[v].iter().copied().filter(|&e| alive[e]).collect()
        } else if outdeg[v] == 0 {
            ins[v].iter().copied().filter(|&e| alive[e]).collect()
        } else {
            continue;
        };
        for e in dead {
            alive[e] = false;
            let (a, b) = g.ends[e];
            outdeg[a] -= 1;
            indeg[b] -= 1;
            for w in [a, b] {
                if (indeg[w] == 0) != (outdeg[w] == 0) {
                    stack.push(w);
                }
            }
        }
    }
    let mut used = vec![false; pieces.len()];
    let mut loops = Vec::new();
    for e0 in 0..pieces.len() {
        if !alive[e0] || used[e0] {
            continue;
        }
        used[e0] = true;
        let start_node = g.ends[e0].0;
        let mut lp = vec![e0];
        let mut cur = e0;
        let mut guard = 0usize;
        loop {
            guard += 1;
            if guard > pieces.len() + 1 {
                return Err(Error::FallbackRequired("offset stitching did not terminate".into()));
            }
            let node = g.ends[cur].1;
            let t_in = pieces[cur].prim.tangent_at(1.0);
            let mut best: Option<(f64, f64, usize)> = None;
            for &e in &outs[node] {
                let avail = alive[e] && (!used[e] || (e == e0 && node == start_node));
                if !avail {
                    continue;
                }
                let t_out = pieces[e].prim.tangent_at(0.0);
                let mut ang = t_in.cross(t_out).atan2(t_in.dot(t_out));
                if ang <= -PI + 1e-12 {
                    ang = PI;
                }
                let k = pieces[e].prim.curvature();
                let better = match best {
                    None => true,
                    Some((ba, bk, _)) => ang > ba + 1e-10 || ((ang - ba).abs() <= 1e-10 && k > bk),
                };
                if better {
                    best = Some((ang, k, e));
                }
            }
            let Some((_, _, e)) = best else {
                return Err(Error::FallbackRequired("offset pieces do not close into loops".into()));
            };
            if e == e0 {
                break;
            }
            used[e] = true;
            lp.push(e);
            cur = e;
        }
        loops.push(finish_loop(&lp, pieces, g));
    }
    // discard zero-area loops (coincident opposite pieces)
    let area_eps = tol.node * tol.node.max(1e-300).sqrt();
    Ok(loops.into_iter().filter(|l| loop_area(l).abs() > area_eps).collect())
}

fn finish_loop(lp: &[usize], pieces: &[Piece], g: &Graph) -> Vec<Prim> {
    // merge consecutive sub-pieces of the same candidate
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &e in lp {
        match groups.last_mut() {
            Some(gr) if pieces[gr[0]].source == pieces[e].source => gr.push(e),
            _ => groups.push(vec![e]),
        }
    }
    if groups.len() > 1 && pieces[groups[0][0]].source == pieces[groups.last().unwrap()[0]].source {
        let last = groups.pop().unwrap();
        let mut merged = last;
        merged.extend(groups[0].iter().copied());
        groups[0] = merged;
    }
    groups
        .iter()
        .map(|gr| {
            let first = &pieces[gr[0]].prim;
            let a = g.nodes[g.ends[gr[0]].0];
            let b = g.nodes[g.ends[*gr.last().unwrap()].1];
            match *first {
                Prim::Seg { .. } => Prim::Seg { a, b },
                Prim::Arc { c, r, .. } => {
                    let sw: f64 = gr
                        .iter()
                        .map(|&e| match pieces[e].prim {
                            Prim::Arc { sw, .. } => sw,
                            _ => 0.0,
                        })
                        .sum();
                    Prim::arc_between(c, r, a, b, sw)
                }
            }
        })
        .collect()
}

/// Signed area enclosed by a closed chain of primitives.
pub(crate) fn loop_area(lp: &[Prim]) -> f64 {
    let mut a = 0.0;
    for p in lp {
        a += 0.5 * p.start().cross(p.end());
        if let Prim::Arc { r, sw, .. } = *p {
            let b = sw.abs();
            a += sw.signum() * 0.5 * r * r * (b - b.sin());
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square(s: f64) -> Vec<Prim> {
        let pts = [Point::new(0.0, 0.0), Point::new(s, 0.0), Point::new(s, s), Point::new(0.0, s)];
        (0..4).map(|i| Prim::Seg { a: pts[i], b: pts[(i + 1) % 4] }).collect()
    }

    fn disc(r: f64) -> Vec<Prim> {
        (0..4).map(|i| Prim::arc(Point::ORIGIN, r, i as f64 * PI / 2.0, PI / 2.0)).collect()
    }

    #[test]
    fn square_erosion() {
        let tol = Tolerances::for_scale(1.5);
        let out = offset_left(&[square(1.0)], 0.2, &tol).unwrap();
        assert_eq!(out.len(), 1);
        assert!((loop_area(&out[0]) - 0.36).abs() < 1e-14);
    }

    #[test]
    fn square_dilation_via_reversal() {
        let tol = Tolerances::for_scale(1.5);
        let rev: Vec<Prim> = square(1.0).iter().rev().map(|p| p.reversed()).collect();
        let out = offset_left(&[rev], 0.3, &tol).unwrap();
        assert_eq!(out.len(), 1);
        let a = -loop_area(&out[0]);
        assert!((a - (1.0 + 4.0 * 0.3 + PI * 0.09)).abs() < 1e-12, "{a}");
    }

    #[test]
    fn disc_erosion_and_collapse() {
        let tol = Tolerances::for_scale(2.0);
        let out = offset_left(&[disc(1.0)], 0.3, &tol).unwrap();
        assert_eq!(out.len(), 1);
        assert!((loop_area(&out[0]) - PI * 0.49).abs() < 1e-13);
        assert!(offset_left(&[disc(1.0)], 1.0, &tol).unwrap().is_empty());
        assert!(offset_left(&[disc(1.0)], 1.5, &tol).unwrap().is_empty());
    }
}

