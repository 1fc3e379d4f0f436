use wittlink::complex::*;

fn main() {
    let w1 = BraidWord::new(3, vec![1]);
    let w2 = BraidWord::new(3, vec![2, -1]);
    let prod = bracket(&w1.concat(&w2));
    let c1 = bracket_letter(3, 1, "x", "m1");
    let c2 = {
        let a = bracket_letter(3, 2, "m1", "m2");
        let b = bracket_letter(3, -1, "m2", "y");
        tensor_complex(&a, &b).unwrap()
    };
    let t = tensor_complex(&c1, &c2).unwrap();
    for (k, d) in &prod.diffs {
        let td = &t.diffs[k];
        if d != td {
            println!("diff differs at k={k}");
            for i in 0..d.rows {
                for j in 0..d.cols {
                    if d.get(i, j) != td.get(i, j) {
                        println!("  entry ({i},{j})");
                    }
                }
            }
        }
    }
    println!("t_shift: {} vs {}", prod.t_shift_doubled, t.t_shift_doubled);
}
