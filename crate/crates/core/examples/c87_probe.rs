use realqe::formula::parse;
use realqe::poly::DEFAULT_MONOMIAL_BUDGET;
use realqe::signtable::{atom_polynomials, build_sign_table};

fn main() {
    let f = parse("(3-2*X-4*X*X+4*X*X*X*X >= 0 \\/ 2+X+4*X*X+5*X*X*X+X*X*X*X < 0) /\\ ~(0-2-2*X+2*X*X-2*X*X*X+2*X*X*X*X = 0)").unwrap();
    let polys = atom_polynomials(&f, DEFAULT_MONOMIAL_BUDGET).unwrap();
    let t = std::time::Instant::now();
    let (cl, table) = build_sign_table(&polys).unwrap();
    println!("build: {:?}", t.elapsed());
    println!("closure size: {}", cl.len());
    println!("columns: {}", table.columns().len());
    let max_bits = cl.items().iter().map(|p| p.coefficient_bits()).max().unwrap();
    println!("max coefficient bits: {}", max_bits);
    let mut by_deg = std::collections::BTreeMap::new();
    for p in cl.items() {
        *by_deg.entry(p.degree("X")).or_insert(0usize) += 1;
    }
    println!("by degree: {:?}", by_deg);
}
