//! Sanity checks for the Sturm-bisection oracle itself, against hand-known
//! roots and the exact evaluator.

mod common;

use common::{
    count_components_oracle, decide_oracle, distinct_root_count, isolate_roots, sign_at_root,
    RootLoc, UPoly,
};
use realqe::formula::parse;
use realqe::rat::{rat, rat_int, Sign};

fn up(coeffs: &[i64]) -> UPoly {
    UPoly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
}

#[test]
fn isolates_known_roots() {
    // X² − 2: two irrational roots
    let p = up(&[-2, 0, 1]);
    let (_, roots) = isolate_roots(&p);
    assert_eq!(roots.len(), 2);
    // (X−1)²(X+3): roots −3 and 1 (double)
    let q = up(&[3, -5, 1, 1]);
    let (_, roots) = isolate_roots(&q);
    assert_eq!(roots.len(), 2);
    // x³ − 2x² − x + 2 = (x−2)(x−1)(x+1)
    let c = up(&[2, -1, -2, 1]);
    let (_, roots) = isolate_roots(&c);
    assert_eq!(roots.len(), 3);
    for (loc, expected) in roots.iter().zip([-1i64, 1, 2]) {
        match loc {
            RootLoc::Exact(x) => assert_eq!(x, &rat_int(expected)),
            RootLoc::Open(l, r) => {
                assert!(l < &rat_int(expected) && &rat_int(expected) < r)
            }
        }
    }
}

#[test]
fn signs_at_irrational_roots() {
    // at α = √2 (positive root of X²−2): X³ is positive, X−2 negative,
    // X²−2 zero, and 2X²−4 zero (shared root through the gcd path)
    let p = up(&[-2, 0, 1]);
    let (sf, roots) = isolate_roots(&p);
    let alpha = roots.last().unwrap();
    assert_eq!(sign_at_root(&up(&[0, 0, 0, 1]), &sf, alpha), Sign::Pos);
    assert_eq!(sign_at_root(&up(&[-2, 1]), &sf, alpha), Sign::Neg);
    assert_eq!(sign_at_root(&up(&[-2, 0, 1]), &sf, alpha), Sign::Zero);
    assert_eq!(sign_at_root(&up(&[-4, 0, 2]), &sf, alpha), Sign::Zero);
}

#[test]
fn distinct_roots_across_polynomials() {
    // shared root at 2, plus ±√2, plus 5/3
    let polys = vec![up(&[-2, 0, 1]), up(&[-2, 1]), up(&[-4, 0, 1]).squarefree(), up(&[-5, 3])];
    // roots: ±√2, 2, ±2, 5/3 → distinct set {−2, −√2, √2, 5/3, 2}
    assert_eq!(distinct_root_count(&polys), 5);
}

#[test]
fn oracle_decides_fixtures() {
    let t = parse("X*X = 2").unwrap();
    assert!(decide_oracle(&t, "X"));
    let f = parse("X*X + 1 = 0").unwrap();
    assert!(!decide_oracle(&f, "X"));
    let w = parse("X > 0 /\\ X*X*X - 2*X*X - X + 2 < 0 /\\ 4 - X*X > 0").unwrap();
    assert!(decide_oracle(&w, "X"));
}

#[test]
fn oracle_counts_components() {
    assert_eq!(count_components_oracle(&parse("X*X > 1").unwrap(), "X"), 2);
    assert_eq!(count_components_oracle(&parse("X*X >= 0").unwrap(), "X"), 1);
    assert_eq!(count_components_oracle(&parse("X*X < 0").unwrap(), "X"), 0);
    let two = parse("4 - X*X > 0 /\\ X*X*X - 2*X*X - X + 2 < 0").unwrap();
    assert_eq!(count_components_oracle(&two, "X"), 2);
    // touching point merges nothing: (X−1)² ≤ 0 is the single point 1
    assert_eq!(
        count_components_oracle(&parse("(X-1)*(X-1) <= 0").unwrap(), "X"),
        1
    );
}

#[test]
fn exact_rational_roots_found() {
    // roots 1/2 and −3/4 of (2X−1)(4X+3)
    let p = up(&[-3, 2, 8]);
    let (_, roots) = isolate_roots(&p);
    assert_eq!(roots.len(), 2);
    let hit = |target: realqe::rat::Rat| {
        roots.iter().any(|loc| match loc {
            RootLoc::Exact(x) => *x == target,
            RootLoc::Open(l, r) => l < &target && &target < r,
        })
    };
    assert!(hit(rat(1, 2)));
    assert!(hit(rat(-3, 4)));
}
