use kolmolab::toyvm::*;
use kolmolab::numeric::log2_biguint;
use num_bigint::BigUint;

fn main() {
    for lmax in [14u32, 18, 20] {
        let machine = ToyMachine::new(lmax, 1000).unwrap();
        let oracle = ComplexityOracle::build(machine, &[]).unwrap();
        let t = oracle.epsilon_table();
        let mut max_gap = f64::NEG_INFINITY;
        let mut argmax = String::new();
        for (x, e) in t.entries() {
            // gap = khat - log2(1/mhat) = khat + log2(mhat_scaled) - lmax
            let gap = e.khat as f64 + log2_biguint(&BigUint::from(e.mhat_scaled)) - lmax as f64;
            if gap > max_gap { max_gap = gap; argmax = x.to_string(); }
        }
        println!("lmax={lmax}: max khat - log2(1/mhat) = {max_gap:.3} at {argmax:?}");
    }
}
