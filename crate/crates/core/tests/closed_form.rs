//! Closed-form Betti numbers of B_k(Σ_g), used as an oracle that shares no
//! code with the CE pipeline.

use num_rational::Ratio;

use confspace::algebra::Surface;
use confspace::ce::betti_table;

type Q = Ratio<i128>;

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// `n! / (a! b! (n−a−b)!)`, zero when `n < a + b`.
fn multinomial(n: i64, a: i64, b: i64) -> i128 {
    binom(n, a) * binom(n - a, b)
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_{j<g} Σ_{m≤j} (−1)^{g+j+1} (2j−2m+2)/(2j−m+2) Σ_c multinomial((6j+2i+2g−2m+c(σ))/4; m, 2j−m+1)`
/// where each `c` maps `σ = (−1)^{i+j+g+m}` to the numerator offset.
fn core_sum(g: i64, i: i64, offsets: &[fn(i64) -> i64]) -> Q {
    let mut total = Q::from_integer(0);
    for j in 0..g {
        for m in 0..=j {
            let s = sign(i + j + g + m);
            let factor = Q::new((2 * j - 2 * m + 2) as i128, (2 * j - m + 2) as i128) * Q::from_integer(sign(g + j + 1) as i128);
            for off in offsets {
                let num = 6 * j + 2 * i + 2 * g - 2 * m + off(s);
                assert_eq!(num.rem_euclid(4), 0, "non-integral top entry at g={g} i={i} j={j} m={m}");
                total += factor * Q::from_integer(multinomial(num / 4, m, 2 * j - m + 1));
            }
        }
    }
    total
}

fn to_int(q: Q) -> i128 {
    assert!(q.is_integer(), "non-integral Betti number {q}");
    q.to_integer()
}

fn beta(g: i64, k: i64, i: i64) -> i128 {
    let g2 = 2 * g - 2;
    if i > k + 1 || i < 0 {
        return 0;
    }
    if i == k + 1 {
        if i < 5 {
            return [0, 0, 1, 0, 2 * g as i128][i as usize];
        }
        return to_int(core_sum(g, i, &[|s| -5 - 3 * s]));
    }
    if i == k {
        if i < 5 {
            let g = g as i128;
            return match (i, g) {
                (0, _) => 1,
                (1, _) => 2 * g,
                (2, _) => 2 * g * g - g,
                (3, 1) => 4,
                (3, _) => (4 * g * g * g - g + 3) / 3,
                (4, 0) => 0,
                (4, 1) => 4,
                (4, 2) => 24,
                _ => (4 * g.pow(4) + 4 * g.pow(3) - g * g + 11 * g) / 6,
            };
        }
        let sum = core_sum(g, i, &[|s| 1 + 3 * s, |s| -3 + 3 * s, |s| -5 - 3 * s]);
        return to_int(sum) - binom(2 * g + i - 4, g2);
    }
    if i < 5 {
        let g = g as i128;
        return match (i, g) {
            (0, _) => 1,
            (1, _) => 2 * g,
            (2, 0) => 0,
            (2, 1) => 3,
            (2, _) => 2 * g * g - g,
            (3, 0) => 1,
            (3, 1) => 5,
            (3, 2) => 16,
            (3, _) => (4 * g * g * g - g + 3) / 3,
            (4, 0) => 0,
            (4, 1) => 7,
            (4, 2) => 28,
            (4, 3) => 90,
            _ => (4 * g.pow(4) + 4 * g.pow(3) - g * g + 11 * g) / 6,
        };
    }
    let sum = core_sum(g, i, &[|s| 3 - 3 * s, |s| 1 + 3 * s, |s| -3 + 3 * s, |s| -5 - 3 * s]);
    to_int(sum) - binom(2 * g + i - 1, g2) - binom(2 * g + i - 4, g2)
}

#[test]
fn torus_matches_closed_form() {
    let t = betti_table(&Surface::torus(), 7).unwrap();
    for k in 1..=7u32 {
        let formula: Vec<usize> = (0..=k as i64 + 1).map(|i| beta(1, k as i64, i) as usize).collect();
        let mut computed: Vec<usize> = (0..=k as i64 + 1).map(|i| t.total(k, i)).collect();
        computed.resize(formula.len(), 0);
        assert_eq!(computed, formula, "B_{k}(T)");
    }
}

#[test]
fn higher_genus_matches_closed_form() {
    for (g, k_max) in [(2u32, 7u32), (3, 7)] {
        let t = betti_table(&Surface::closed(g), k_max).unwrap();
        for k in 1..=k_max {
            for i in 0..=k as i64 + 2 {
                assert_eq!(t.total(k, i) as i128, beta(g as i64, k as i64, i), "β_{i}(B_{k}(Σ_{g}))");
            }
        }
    }
}
