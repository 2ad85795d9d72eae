#!/usr/bin/env python3
"""Regenerates the bundled articulated-object domains.

Joint angles use an absolute representation: rotating a joint also rotates
every joint downstream of it, so the downstream angle is updated through
conditional effects. Angles are domain constants in 15 degree steps; the
allowed increments are static (succ a b) atoms supplied by each problem.
"""
import pathlib

STEP = 15
ANGLES = [f"a{d}" for d in range(0, 360, STEP)]


def nxt(i):
    return ANGLES[(i + 1) % len(ANGLES)]


def prv(i):
    return ANGLES[(i - 1) % len(ANGLES)]


def turn_whens(var, direction, indent):
    out = []
    for i, a in enumerate(ANGLES):
        if direction == "cw":
            b = nxt(i)
            step = f"(succ {a} {b})"
        else:
            b = prv(i)
            step = f"(succ {b} {a})"
        out.append(f"{indent}(when (and (angle {var} {a}) {step})\n"
                   f"{indent}  (and (not (angle {var} {a})) (angle {var} {b})))")
    return "\n".join(out)


HEADER = """(define (domain {name})
  (:requirements :strips :typing :negative-preconditions :equality :conditional-effects)
  (:types link joint gripper angle)
  (:constants {angles} - angle)
  (:predicates
    (free ?g - gripper)
    (in-hand ?l - link ?g - gripper)
    (connected ?j - joint ?l1 - link ?l2 - link)
    (after ?j1 - joint ?j2 - joint)
    (tip ?j - joint)
    (angle ?j - joint ?a - angle)
    (succ ?a1 - angle ?a2 - angle))
"""

GRASP = """
  ; both grippers close on the two links around a joint
  (:action grasp
    :parameters (?j - joint ?l1 ?l2 - link ?g1 ?g2 - gripper)
    :precondition (and (connected ?j ?l1 ?l2) (free ?g1) (free ?g2) (not (= ?g1 ?g2)))
    :effect (and (in-hand ?l1 ?g1) (in-hand ?l2 ?g2) (not (free ?g1)) (not (free ?g2))))

  (:action release
    :parameters (?l1 ?l2 - link ?g1 ?g2 - gripper)
    :precondition (and (in-hand ?l1 ?g1) (in-hand ?l2 ?g2) (not (= ?g1 ?g2)))
    :effect (and (free ?g1) (free ?g2) (not (in-hand ?l1 ?g1)) (not (in-hand ?l2 ?g2))))
"""


def rotate(name, direction, tip, hold):
    if tip:
        params = "?j - joint ?l1 ?l2 - link ?g1 ?g2 - gripper"
        link = "(tip ?j)"
    else:
        params = "?j ?jd - joint ?l1 ?l2 - link ?g1 ?g2 - gripper"
        link = "(after ?j ?jd)"
    if hold:
        grip = "(in-hand ?l1 ?g1) (in-hand ?l2 ?g2)"
    else:
        grip = "(free ?g1) (free ?g2) (not (= ?g1 ?g2))"
    body = turn_whens("?j", direction, "      ")
    if not tip:
        body += "\n" + turn_whens("?jd", direction, "      ")
    return (f"\n  (:action {name}\n"
            f"    :parameters ({params})\n"
            f"    :precondition (and (connected ?j ?l1 ?l2) {link} {grip})\n"
            f"    :effect (and\n{body}))\n")


def domain(name, hold):
    text = HEADER.format(name=name, angles=" ".join(ANGLES))
    if hold:
        text += GRASP
    text += rotate("rotate-cw", "cw", False, hold)
    text += rotate("rotate-ccw", "ccw", False, hold)
    text += rotate("rotate-cw-tip", "cw", True, hold)
    text += rotate("rotate-ccw-tip", "ccw", True, hold)
    return text + ")\n"


def main():
    root = pathlib.Path(__file__).resolve().parent
    (root / "artic3" / "domain.pddl").write_text(domain("artic3", True))
    (root / "artic3-macro" / "domain.pddl").write_text(domain("artic3-macro", False))


if __name__ == "__main__":
    main()
