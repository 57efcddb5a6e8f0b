use realqe::poly::DEFAULT_MONOMIAL_BUDGET;
use realqe::signtable::count_components;
include!("../tests/common/genfree.rs");

fn main() {
    let mut g = Gen::new(9009);
    let mut t_engine = std::time::Duration::ZERO;
    let mut worst = std::time::Duration::ZERO;
    for i in 0..300 {
        let f = g.univariate_formula("X", 3, 4);
        let t = std::time::Instant::now();
        let _ = count_components(&f, DEFAULT_MONOMIAL_BUDGET).unwrap();
        let dt = t.elapsed();
        t_engine += dt;
        if dt > worst { worst = dt; println!("engine case {}: {:?} ({})", i, dt, f); }
    }
    println!("engine total: {:?}, worst {:?}", t_engine, worst);
}
