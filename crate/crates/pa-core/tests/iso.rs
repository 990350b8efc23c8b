use pa_core::fixture::{load_bundled, parse_fixture};
use pa_core::isomorphic;

#[test]
fn renaming_and_reordering_preserve_isomorphism() {
    let a = parse_fixture("state p\nstate q\nstate r\ninit p\ntrans p a { q:1/2, r:1/2 }\ntrans q b { p:1 }\ntrans r c { r:1 }\n").unwrap();
    let b = parse_fixture("state z\nstate y\nstate x\ninit x\ntrans y c { y:1 }\ntrans z b { x:1 }\ntrans x a { y:1/2, z:1/2 }\n").unwrap();
    assert!(isomorphic(&a, &b));
    let c = parse_fixture("state z\nstate y\nstate x\ninit x\ntrans y c { y:1 }\ntrans z b { z:1 }\ntrans x a { y:1/2, z:1/2 }\n").unwrap();
    assert!(!isomorphic(&a, &c));
}

#[test]
fn unreachable_states_are_ignored() {
    let a = load_bundled("dice-wrong").unwrap();
    let mut text = pa_core::fixture::DICE_WRONG.to_string();
    text.push_str("state junk\ntrans junk tau { XX:1 }\n");
    assert!(isomorphic(&a, &parse_fixture(&text).unwrap()));
    assert!(!isomorphic(&a, &load_bundled("dice").unwrap()));
    assert!(isomorphic(&load_bundled("fig1").unwrap(), &load_bundled("fig1").unwrap()));
}
