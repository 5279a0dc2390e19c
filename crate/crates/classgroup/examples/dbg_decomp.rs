use classgroup::field::NumberField;
use classgroup::intpoly::IntPoly;
use classgroup::ideal::decompose;

fn main() {
    let k = NumberField::new(IntPoly::from_i64_desc(&[1, 0, 0, -17])).unwrap();
    println!("index = {}", k.index());
    println!("mult table:");
    for i in 0..3 {
        for j in 0..3 {
            println!("  b{}*b{} = {:?}", i, j, k.mult_table()[i][j]);
        }
    }
    let ps = decompose(&k, 3);
    for q in &ps {
        println!("prime: p={} e={} f={} hnf={:?}", q.p, q.e, q.fdeg, q.ideal.hnf);
    }
}
