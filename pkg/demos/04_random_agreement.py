"""Cross-validate the two contraction tests on random systems.

The sigma-form test (Re P0 <= 0, wb Sigma wb* >= 0, rank n) and the
kernel-form oracle (the boundary form non-positive on ker wb_tilde) are
mathematically equivalent but share no code.  Random systems of several
dimensions, with class hints steering them toward contractive / unitary /
unconstrained behaviour, must produce identical verdicts away from the
numerical frontier.
"""

import phs


def main():
    print(f"{'n':>3} {'count':>6} {'agree':>6} {'disagree':>9} {'frontier':>9} "
          f"{'contraction':>12} {'unitary':>8}")
    for n in (1, 2, 3, 4, 6):
        rep = phs.agreement_campaign(n, 400, seed=42)
        print(f"{n:>3} {rep['count']:>6} {rep['agree']:>6} {rep['disagree']:>9} "
              f"{rep['frontier']:>9} {rep['verdicts']['contraction']:>12} "
              f"{rep['verdicts']['unitary']:>8}")
    print()
    print("disagreements must be zero; frontier cases (witness within 10x the")
    print("semidefiniteness tolerance of zero) are excluded and counted instead.")
    print("the same report is available as:  phs oracle --n 3 --count 1000 --seed 42")


if __name__ == "__main__":
    main()
