//! Build GF(p^k) and print its addition and multiplication tables.
//!
//! ```bash
//! cargo run --example field_tables -- 3 2
//! ```

use kakeya::FieldTable;

fn print_table(field: &FieldTable, name: &str, op: impl Fn(usize, usize) -> usize) {
    let q = field.q();
    println!("{name}");
    print!("   |");
    for b in 0..q {
        print!("{b:>4}");
    }
    println!();
    for a in 0..q {
        print!("{a:>3}|");
        for b in 0..q {
            print!("{:>4}", op(a, b));
        }
        println!();
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let p: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let k: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let field = FieldTable::new(p, k)?;
    let el = |i| field.elem(i).unwrap();

    println!("GF({}^{}) has {} elements", p, k, field.q());
    match field.modulus() {
        Some(m) => println!("modulus coefficients, constant first: {m:?}"),
        None => println!("prime field, arithmetic mod {p}"),
    }
    print_table(&field, "addition", |a, b| field.add(el(a), el(b)).idx());
    print_table(&field, "multiplication", |a, b| field.mul(el(a), el(b)).idx());

    println!("product of all nonzero elements: {}", field.nonzero_product());
    println!("axioms hold: {}", field.check_axioms());
    Ok(())
}
