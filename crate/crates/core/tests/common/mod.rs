//! Independent oracles shared by the integration tests. Nothing here calls
//! the Smith form, the Magnus machinery or the saturation routine.
#![allow(dead_code)]

use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::Rng;
use vknot::{BraidLetter, BraidWord, GenId, Presentation, Word};

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // a first, then b
    a.iter().map(|&i| b[i]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x] = i;
    }
    r
}

fn all_perms(n: usize) -> Vec<Perm> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn index(g: GenId) -> usize {
    match g {
        GenId::Free(i) => i as usize,
        GenId::Abelian { .. } => panic!("free generators only"),
    }
}

fn eval_perm(w: &Word, images: &[Perm], n: usize) -> Perm {
    let mut acc: Perm = (0..n).collect();
    for s in w.syllables() {
        let e = s.exp.to_i64().expect("small exponent");
        let p = if e > 0 { images[index(s.gen)].clone() } else { invert(&images[index(s.gen)]) };
        for _ in 0..e.unsigned_abs() {
            acc = compose(&acc, &p);
        }
    }
    acc
}

/// `|Hom(G, S_n)|` by brute force over generator images.
pub fn hom_count_symmetric(p: &Presentation, n: usize) -> usize {
    let perms = all_perms(n);
    let k = p.num_generators();
    let id: Perm = (0..n).collect();
    let mut count = 0;
    let mut choice = vec![0usize; k];
    loop {
        let images: Vec<Perm> = choice.iter().map(|&c| perms[c].clone()).collect();
        if p.relators().iter().all(|r| eval_perm(r, &images, n) == id) {
            count += 1;
        }
        let mut i = 0;
        while i < k {
            choice[i] += 1;
            if choice[i] < perms.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            return count;
        }
    }
}

/// `|Hom(G, Z_m)|` from exponent sums; equals `prod gcd(d_i, m) * m^rank`.
pub fn hom_count_cyclic(p: &Presentation, m: u64) -> u64 {
    let k = p.num_generators();
    let sums: Vec<Vec<i64>> = p
        .relators()
        .iter()
        .map(|r| (0..k).map(|i| r.exponent_sum(GenId::Free(i as u32)).to_i64().unwrap()).collect())
        .collect();
    let mut count = 0;
    let total = m.pow(k as u32);
    for code in 0..total {
        let vals: Vec<i64> = (0..k).map(|i| ((code / m.pow(i as u32)) % m) as i64).collect();
        if sums.iter().all(|row| row.iter().zip(&vals).map(|(a, b)| a * b).sum::<i64>().rem_euclid(m as i64) == 0) {
            count += 1;
        }
    }
    count
}

/// The same count for a group given by free rank and torsion coefficients.
pub fn hom_count_cyclic_of(free_rank: u32, torsion: &[u64], m: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    m.pow(free_rank) * torsion.iter().map(|&d| gcd(d, m)).product::<u64>()
}

pub fn random_braid(rng: &mut StdRng, strands: u32, len: usize) -> BraidWord {
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands);
            if rng.gen_bool(0.5) {
                BraidLetter::rho(i)
            } else {
                BraidLetter::sigma(i, if rng.gen_bool(0.5) { 1 } else { -1 })
            }
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

pub fn random_word(rng: &mut StdRng, gens: u32, len: usize) -> Word {
    let mut w = Word::identity();
    for _ in 0..len {
        let e: i64 = [-2, -1, 1, 2, 3][rng.gen_range(0..5)];
        w = w.multiply(&Word::power_of(GenId::Free(rng.gen_range(0..gens)), e));
    }
    w
}
