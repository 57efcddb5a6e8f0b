//! Exact planar combinatorics: triple signs, order types, line-point
//! duality, combinatorial descriptions of line arrangements, and
//! cross-ratios. Everything is rational arithmetic over exact coordinates;
//! no root or distance is ever taken.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::rat::{parse_rat, Rat, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }
}

/// Nonvertical line `y = a·x − b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualLine {
    pub slope: Rat,
    pub offset: Rat,
}

/// Sign map on index triples `i < j < k` (1-based), total on C(n,3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialOrderType {
    n: usize,
    signs: BTreeMap<(usize, usize, usize), Sign>,
}

/// Per-line left-to-right crossing lists; a group with several indices is a
/// column of coinciding crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementDescription {
    n: usize,
    lists: Vec<Vec<BTreeSet<usize>>>,
}

/// Violations reported by the description consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyViolation {
    /// Line `line`'s list does not contain each other index exactly once.
    Coverage { line: usize, index: usize, count: usize },
    /// The three relative crossing orders of a triple do not fit any
    /// arrangement (they must all agree via the convexity of the middle
    /// crossing).
    Ordering { i: usize, j: usize, k: usize },
}

impl fmt::Display for ConsistencyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConsistencyViolation::Coverage { line, index, count } => write!(
                f,
                "line {}: index {} appears {} times (expected once)",
                line, index, count
            ),
            ConsistencyViolation::Ordering { i, j, k } => {
                write!(f, "triple ({}, {}, {}): crossing orders are inconsistent", i, j, k)
            }
        }
    }
}

/// Orientation of the ordered triple `(p, q, r)`: the sign of the
/// determinant with rows `q − p` and `r − p`.
pub fn triple_sign(p: &Point, q: &Point, r: &Point) -> Sign {
    let det = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    Sign::of(&det)
}

impl CombinatorialOrderType {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sign(&self, i: usize, j: usize, k: usize) -> Option<Sign> {
        self.signs.get(&(i, j, k)).copied()
    }

    /// Sign for an arbitrarily ordered triple of distinct indices, using the
    /// antisymmetry of the orientation determinant.
    pub fn sign_oriented(&self, a: usize, b: usize, c: usize) -> Option<Sign> {
        let mut perm = [a, b, c];
        let mut swaps = 0;
        for i in 0..2 {
            for j in 0..2 - i {
                if perm[j] > perm[j + 1] {
                    perm.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        let s = self.sign(perm[0], perm[1], perm[2])?;
        Some(if swaps % 2 == 1 { s.flip() } else { s })
    }

    pub fn is_simple(&self) -> bool {
        self.signs.values().all(|s| *s != Sign::Zero)
    }

    pub fn from_signs(
        n: usize,
        signs: BTreeMap<(usize, usize, usize), Sign>,
    ) -> Result<CombinatorialOrderType> {
        for i in 1..=n {
            for j in (i + 1)..=n {
                for k in (j + 1)..=n {
                    if !signs.contains_key(&(i, j, k)) {
                        return Err(Error::Input(format!(
                            "missing triple ({}, {}, {})",
                            i, j, k
                        )));
                    }
                }
            }
        }
        if signs.len() != n * (n - 1) * (n - 2) / 6 {
            return Err(Error::Input("extraneous triples".into()));
        }
        Ok(CombinatorialOrderType { n, signs })
    }

    /// Line-oriented machine format: `n`, then one `i j k s` line per triple.
    pub fn machine_format(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for ((i, j, k), s) in &self.signs {
            out.push_str(&format!("{} {} {} {}\n", i, j, k, s.as_i8()));
        }
        out
    }

    pub fn parse(text: &str) -> Result<CombinatorialOrderType> {
        let perr = |line: usize, msg: String| Error::Parse {
            line: line + 1,
            col: 1,
            msg,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, first) = lines.next().ok_or_else(|| perr(0, "empty input".into()))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| perr(ln, "expected point count".into()))?;
        let mut signs = BTreeMap::new();
        for (ln, line) in lines {
            let mut it = line.split_whitespace();
            let mut next_usize = || -> Result<usize> {
                it.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr(ln, "expected index".into()))
            };
            let i = next_usize()?;
            let j = next_usize()?;
            let k = next_usize()?;
            let s: i8 = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| perr(ln, "expected sign".into()))?;
            let sign = match s {
                -1 => Sign::Neg,
                0 => Sign::Zero,
                1 => Sign::Pos,
                _ => return Err(perr(ln, format!("bad sign {}", s))),
            };
            signs.insert((i, j, k), sign);
        }
        CombinatorialOrderType::from_signs(n, signs)
    }
}

/// Order type of a point sequence: the sign of every triple `i < j < k`.
pub fn order_type(points: &[Point]) -> Result<CombinatorialOrderType> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Input("order type needs at least 3 points".into()));
    }
    let mut signs = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                signs.insert(
                    (i + 1, j + 1, k + 1),
                    triple_sign(&points[i], &points[j], &points[k]),
                );
            }
        }
    }
    Ok(CombinatorialOrderType { n, signs })
}

/// Point `(a, b)` ↦ line `y = a·x − b`.
pub fn dualize(p: &Point) -> DualLine {
    DualLine {
        slope: p.x.clone(),
        offset: p.y.clone(),
    }
}

/// Line `y = a·x − b` ↦ point `(a, b)`; mutually inverse with `dualize`.
pub fn dualize_line(l: &DualLine) -> Point {
    Point {
        x: l.slope.clone(),
        y: l.offset.clone(),
    }
}

impl ArrangementDescription {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lists(&self) -> &[Vec<BTreeSet<usize>>] {
        &self.lists
    }

    pub fn from_lists(lists: Vec<Vec<BTreeSet<usize>>>) -> ArrangementDescription {
        ArrangementDescription {
            n: lists.len(),
            lists,
        }
    }

    /// Relative order of `a` and `b` in line `i`'s list.
    fn relative_order(&self, i: usize, a: usize, b: usize) -> Option<std::cmp::Ordering> {
        let list = &self.lists[i - 1];
        let pos = |x: usize| list.iter().position(|g| g.contains(&x));
        match (pos(a), pos(b)) {
            (Some(pa), Some(pb)) => Some(pa.cmp(&pb)),
            _ => None,
        }
    }
}

impl fmt::Display for ArrangementDescription {
    /// `1: {3} {2 4}` — one line per line index, crossing groups in braces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, list) in self.lists.iter().enumerate() {
            write!(f, "{}:", i + 1)?;
            for group in list {
                let items: Vec<String> = group.iter().map(|x| x.to_string()).collect();
                write!(f, " {{{}}}", items.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl ArrangementDescription {
    pub fn parse(text: &str) -> Result<ArrangementDescription> {
        let mut rows: Vec<(usize, Vec<BTreeSet<usize>>)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse {
                line: ln + 1,
                col: 1,
                msg,
            };
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| perr("expected 'index: groups'".into()))?;
            let idx: usize = head
                .trim()
                .parse()
                .map_err(|_| perr("bad line index".into()))?;
            let mut groups = Vec::new();
            let rest = rest.trim();
            let mut chars = rest.chars().peekable();
            while let Some(c) = chars.next() {
                match c {
                    '{' => {
                        let mut body = String::new();
                        for c in chars.by_ref() {
                            if c == '}' {
                                break;
                            }
                            body.push(c);
                        }
                        let mut group = BTreeSet::new();
                        for tok in body.split_whitespace() {
                            group.insert(
                                tok.parse::<usize>()
                                    .map_err(|_| perr(format!("bad index '{}'", tok)))?,
                            );
                        }
                        if group.is_empty() {
                            return Err(perr("empty crossing group".into()));
                        }
                        groups.push(group);
                    }
                    ' ' => {}
                    other => return Err(perr(format!("unexpected character '{}'", other))),
                }
            }
            rows.push((idx, groups));
        }
        rows.sort_by_key(|(i, _)| *i);
        for (expect, (got, _)) in rows.iter().enumerate() {
            if *got != expect + 1 {
                return Err(Error::Input(format!(
                    "line indices must be 1..n, found {}",
                    got
                )));
            }
        }
        Ok(ArrangementDescription::from_lists(
            rows.into_iter().map(|(_, g)| g).collect(),
        ))
    }
}

/// Combinatorial description of a line arrangement: lines are renumbered by
/// decreasing slope, and each line lists the other lines in the left-to-right
/// order of the crossings, grouping coinciding crossings into columns.
pub fn arrangement_description(lines: &[DualLine]) -> Result<ArrangementDescription> {
    let n = lines.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if lines[i].slope == lines[j].slope {
                return Err(Error::Input(format!(
                    "duplicate slope between lines {} and {}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    // renumber by decreasing slope
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lines[b].slope.cmp(&lines[a].slope));
    let sorted: Vec<&DualLine> = order.iter().map(|&i| &lines[i]).collect();
    let crossing_x = |i: usize, j: usize| -> Rat {
        // a_i x − b_i = a_j x − b_j  ⇒  x = (b_i − b_j)/(a_i − a_j)
        (&sorted[i].offset - &sorted[j].offset) / (&sorted[i].slope - &sorted[j].slope)
    };
    let mut lists = Vec::with_capacity(n);
    for i in 0..n {
        let mut by_x: BTreeMap<Rat, BTreeSet<usize>> = BTreeMap::new();
        for j in 0..n {
            if i != j {
                by_x.entry(crossing_x(i, j)).or_default().insert(j + 1);
            }
        }
        lists.push(by_x.into_values().collect());
    }
    Ok(ArrangementDescription { n, lists })
}

/// Consistency report: coverage of every list, and coherence of the three
/// relative crossing orders of every triple. An empty report is necessary
/// (not sufficient) for realizability.
pub fn check_description_consistency(d: &ArrangementDescription) -> Vec<ConsistencyViolation> {
    let mut out = Vec::new();
    let n = d.n;
    for i in 1..=n {
        for x in 1..=n {
            if x == i {
                continue;
            }
            let count = d.lists[i - 1].iter().filter(|g| g.contains(&x)).count();
            if count != 1 {
                out.push(ConsistencyViolation::Coverage { line: i, index: x, count });
            }
        }
        // a line must not list itself
        if d.lists[i - 1].iter().any(|g| g.contains(&i)) {
            out.push(ConsistencyViolation::Coverage {
                line: i,
                index: i,
                count: 1,
            });
        }
    }
    if !out.is_empty() {
        return out;
    }
    // For slopes a_i > a_j > a_k the crossing x_ik is a convex combination of
    // x_ij and x_jk, so all three relative orders are fixed by one
    // comparison: either j-before-k on line i, i-before-k on line j, and
    // i-before-j on line k (all "increasing"), or all three reversed, or all
    // three in one column.
    for i in 1..=n {
        for j in (i + 1)..=n {
            for k in (j + 1)..=n {
                let oi = d.relative_order(i, j, k);
                let oj = d.relative_order(j, i, k);
                let ok = d.relative_order(k, i, j);
                match (oi, oj, ok) {
                    (Some(a), Some(b), Some(c)) => {
                        if !(a == b && b == c) {
                            out.push(ConsistencyViolation::Ordering { i, j, k });
                        }
                    }
                    _ => out.push(ConsistencyViolation::Ordering { i, j, k }),
                }
            }
        }
    }
    out
}

/// The combinatorial direction of the order-type → stretchability reduction.
///
/// Input: a simple order type on `n` points whose last point lies below all
/// the others (far down on the negative y-axis). Output: the combinatorial
/// description of the arrangement of the `n−1` dual lines of the remaining
/// points — computed purely from triple signs, with no coordinates.
pub fn order_type_to_arrangement(t: &CombinatorialOrderType) -> Result<ArrangementDescription> {
    if !t.is_simple() {
        return Err(Error::Input("order type must be simple".into()));
    }
    let n = t.n();
    if n < 3 {
        return Err(Error::Input("need at least 3 points".into()));
    }
    let m = n - 1; // number of dual lines
    // Slope order: the dual slope of point p is its x-coordinate, and with
    // p_n far below, sign(p_i, p_j, p_n) = +1 exactly when x_j < x_i. Sort
    // the first n−1 points by decreasing x (= decreasing dual slope).
    let before = |a: usize, b: usize| t.sign_oriented(a, b, n) == Some(Sign::Pos);
    let mut position = vec![0usize; m + 1]; // 1-based point index → line number −1
    let mut line_to_point = vec![0usize; m + 1];
    {
        let mut idx: Vec<usize> = (1..=m).collect();
        // counting placement keeps the output deterministic even if the
        // comparisons of a non-realizable input are cyclic
        let mut rank: Vec<(usize, usize)> = idx
            .iter()
            .map(|&a| {
                let r = idx.iter().filter(|&&b| b != a && before(b, a)).count();
                (r, a)
            })
            .collect();
        rank.sort();
        idx = rank.iter().map(|&(_, a)| a).collect();
        for (line0, &point) in idx.iter().enumerate() {
            position[point] = line0 + 1;
            line_to_point[line0 + 1] = point;
        }
    }
    // Relative crossing order for a slope-sorted triple r < s < t of lines:
    // the crossing of lines r and s is dual to the line through the two
    // points, and its side with respect to line t is the triple sign of the
    // three points. Sign +1 means every pair appears in increasing line
    // order on the third line.
    let code = |a: usize, b: usize, c: usize| -> Sign {
        t.sign_oriented(line_to_point[a], line_to_point[b], line_to_point[c])
            .expect("triple in range")
    };
    let mut lists: Vec<Vec<BTreeSet<usize>>> = Vec::with_capacity(m);
    for r in 1..=m {
        let others: Vec<usize> = (1..=m).filter(|&x| x != r).collect();
        let mut rank: Vec<(usize, usize)> = others
            .iter()
            .map(|&s| {
                let cnt = others
                    .iter()
                    .filter(|&&u| {
                        u != s && {
                            let mut tri = [r, s, u];
                            tri.sort();
                            let increasing = code(tri[0], tri[1], tri[2]) == Sign::Pos;
                            // "u crosses before s on line r"
                            if increasing {
                                u < s
                            } else {
                                u > s
                            }
                        }
                    })
                    .count();
                (cnt, s)
            })
            .collect();
        rank.sort();
        let list: Vec<BTreeSet<usize>> = rank
            .into_iter()
            .map(|(_, s)| {
                let mut g = BTreeSet::new();
                g.insert(s);
                g
            })
            .collect();
        lists.push(list);
    }
    Ok(ArrangementDescription { n: m, lists })
}

/// Cross-ratio `(a,b;c,d) = (|a,c|·|b,d|)/(|a,d|·|b,c|)` of four collinear
/// points, with oriented distances taken as signed displacements along the
/// line (x-components when the line is nonvertical, else y-components);
/// ratios of collinear displacements equal the Euclidean distance ratios, so
/// everything stays rational and orientation-independent.
pub fn cross_ratio(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<Rat> {
    if triple_sign(a, b, c) != Sign::Zero
        || triple_sign(a, b, d) != Sign::Zero
        || triple_sign(a, c, d) != Sign::Zero
    {
        return Err(Error::Input("points are not collinear".into()));
    }
    let vertical = a.x == b.x && a.x == c.x && a.x == d.x;
    let coord = |p: &Point| if vertical { p.y.clone() } else { p.x.clone() };
    let dist = |p: &Point, q: &Point| coord(q) - coord(p);
    let denom = dist(a, d) * dist(b, c);
    if denom.is_zero() {
        return Err(Error::Input(
            "coincident points make the cross-ratio denominator zero".into(),
        ));
    }
    Ok(dist(a, c) * dist(b, d) / denom)
}

/// Parses a points file: one `x y` pair per line, rationals as `p/q`.
pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse {
            line: ln + 1,
            col: 1,
            msg,
        };
        let mut it = line.split_whitespace();
        let x = it
            .next()
            .and_then(parse_rat)
            .ok_or_else(|| perr("expected x coordinate".into()))?;
        let y = it
            .next()
            .and_then(parse_rat)
            .ok_or_else(|| perr("expected y coordinate".into()))?;
        if it.next().is_some() {
            return Err(perr("trailing input on point line".into()));
        }
        out.push(Point::new(x, y));
    }
    Ok(out)
}
