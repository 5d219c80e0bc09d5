use std::time::Instant;
fn main() {
    let w24 = pgroup::cover::free_quotient(3, 2, 4).unwrap();
    let t = Instant::now();
    println!("class = {}, {:?}", w24.p_class(), t.elapsed());
    let t = Instant::now();
    println!("ab = {}, {:?}", w24.abelian_invariants(), t.elapsed());
    let t = Instant::now();
    let phi = w24.frattini();
    println!("frattini dim = {}, {:?}", phi.order_exp(), t.elapsed());
}
