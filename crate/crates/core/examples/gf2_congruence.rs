//! Kraitchik's factorization of 2041: four relations over {2, 3, 5, 7}, their
//! GF(2) nullspace, and the resulting congruence of squares.

use latfac::numth::FactorBase;
use latfac::relations::SquareRelation;
use latfac::solver::{self, BitMatrix};
use num_bigint::BigInt;

fn main() -> latfac::Result<()> {
    let n = BigInt::from(2041);
    let base = FactorBase::first(4)?;
    let mut rels = Vec::new();
    for x in [46u64, 47, 49, 51] {
        let value = BigInt::from(x * x - 2041);
        let rel = SquareRelation::new(BigInt::from(x), &value, &base)?.expect("smooth over {2,3,5,7}");
        println!("{x}^2 - 2041 = {value}  exponents {:?}", rel.exps.exps);
        rels.push(rel);
    }
    let e = BitMatrix::from_relations(&rels)?;
    println!("rank {} of {} relations", e.rank(), rels.len());
    for z in solver::nullspace(&e) {
        let c = solver::assemble_congruence(&rels, &z, &base, &n)?;
        println!("z = {z:?}: {}^2 = {}^2 (mod 2041)", c.x, c.y);
        if let Some((p, q)) = solver::extract_factor(&c) {
            println!("gcd(x - y, n) = {p}, gcd(x + y, n) = {q}");
        }
    }
    Ok(())
}
