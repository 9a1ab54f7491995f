//! Algebraic laws of federations and a grid oracle for their operations.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tiotest_core::clockspace::{Atom, ClockSet, Federation, Rational, Rel};

pub fn clocks(n: usize) -> Arc<ClockSet> {
    ClockSet::new((0..n).map(|k| format!("c{k}"))).unwrap()
}

/// Union of up to three zones of up to three atoms, diagonals included.
pub fn random_federation(rng: &mut ChaCha8Rng, clocks: &Arc<ClockSet>, m: i64) -> Federation {
    let rels = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt];
    let n = clocks.len();
    let mut f = Federation::empty(clocks);
    for _ in 0..rng.random_range(0..=3) {
        let atoms: Vec<Atom> = (0..rng.random_range(0..=3))
            .map(|_| {
                let left = rng.random_range(1..=n);
                let rel = *rels.choose(rng).unwrap();
                if n > 1 && rng.random_bool(0.25) {
                    let right = (left % n) + 1;
                    Atom::diff(left, right, rel, rng.random_range(-m..=m))
                } else {
                    Atom::clock(left, rel, rng.random_range(0..=m))
                }
            })
            .collect();
        f = f.union(&Federation::from_atoms(clocks, &atoms));
    }
    f
}

/// Points with coordinates in `{0, 1/2, …, m + 1}`.
pub fn grid(n: usize, m: i64) -> Vec<Vec<Rational>> {
    let steps = 2 * (m + 1);
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                (0..=steps).map(move |k| {
                    let mut q = p.clone();
                    q.push(Rational::new(k, 2));
                    q
                })
            })
            .collect();
    }
    out
}

fn some_value(a: &Federation, p: &[Rational], i: usize, m: i64) -> bool {
    (0..=4 * (2 * m + 3)).any(|k| {
        let mut q = p.to_vec();
        q[i] = Rational::new(k, 4);
        a.contains(&q)
    })
}

/// Checks every law on `a`, `b`; returns the first broken one.
pub fn check_laws(a: &Federation, b: &Federation, m: i64) -> Result<(), String> {
    let law = |ok: bool, name: &str| if ok { Ok(()) } else { Err(name.to_string()) };
    let n = a.clocks().len();
    let ca = a.complement();
    law(ca.complement().equals(a), "double complement")?;
    law(a.union(b).complement().equals(&ca.intersect(&b.complement())), "De Morgan (union)")?;
    law(a.intersect(b).complement().equals(&ca.union(&b.complement())), "De Morgan (intersection)")?;
    law(a.subtract(b).equals(&a.intersect(&b.complement())), "difference")?;
    law(a.union(&ca).equals(&Federation::universe(a.clocks())), "excluded middle")?;
    law(!a.intersects(&ca), "non-contradiction")?;
    let (up, down) = (a.up(), a.down());
    law(a.is_subset(&up) && up.up().equals(&up), "up is a closure")?;
    law(a.is_subset(&down) && down.down().equals(&down), "down is a closure")?;
    law(up.is_subset(&a.union(b).up()) && down.is_subset(&a.union(b).down()), "monotone closures")?;
    let norm = a.normalize(m);
    law(a.is_subset(&norm) && norm.normalize(m).equals(&norm), "normalize is a closure")?;
    law(a.clone().merged().equals(a), "merging keeps the set")?;
    if a.is_subset(b) {
        law(a.union(b).equals(b), "subset absorbs union")?;
    }
    let (u, i, d) = (a.union(b), a.intersect(b), a.subtract(b));
    let reset = a.reset(&[1]);
    let free = a.free(&[1]);
    for p in grid(n, m) {
        let (pa, pb) = (a.contains(&p), b.contains(&p));
        law(u.contains(&p) == (pa || pb), "grid: union")?;
        law(i.contains(&p) == (pa && pb), "grid: intersection")?;
        law(d.contains(&p) == (pa && !pb), "grid: difference")?;
        law(ca.contains(&p) == !pa, "grid: complement")?;
        if pa {
            law(up.contains(&p) && down.contains(&p), "grid: closures contain the set")?;
        }
        let witness = some_value(a, &p, 0, m);
        law(free.contains(&p) == witness, "grid: free")?;
        law(reset.contains(&p) == (p[0] == Rational::from_integer(0) && witness), "grid: reset")?;
    }
    Ok(())
}
