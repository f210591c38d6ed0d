//! Driving the `waring` front end in-process and reading its JSON.

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["waring", "decompose", "--q", "13", "--k", "2", "--matrix", "1,1;2", "--json"];
    let code = tri_waring::cli::run(args, &mut out, &mut err);
    let v: serde_json::Value = serde_json::from_slice(&out).expect("json on stdout");
    println!("exit {code}, parts {}, verified {}", v["parts"], v["verified"]);

    let code = tri_waring::cli::run(["waring", "field", "--q", "6"], &mut Vec::new(), &mut err);
    println!("exit {code}: {}", String::from_utf8_lossy(&err).trim());
}
