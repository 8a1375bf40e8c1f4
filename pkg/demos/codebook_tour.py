"""A walk through the nucleotide building blocks.

Prints a few PAIRCODE words, the value categories, and what the rotation
coder does to a short ternary message. Run: python3 demos/codebook_tour.py
"""

from jpegdna import paircode
from jpegdna.nucleotides import validate
from jpegdna.trits import build_code, encode_symbols, nt_to_trits, trits_to_nt

print("PAIRCODE capacities")
for n in range(2, 9):
    print(f"  length {n}: {paircode.capacity(n)} words, first {paircode.codeword(n, 0)}, last {paircode.codeword(n, paircode.capacity(n) - 1)}")

print("\nValue categories (DC differences and AC values)")
for e in paircode.CATEGORIES:
    print(f"  category {e.category}: |v| in {e.lo}..{e.hi}")

print("\nA few values and their words")
for v in (0, 1, -1, 5, 6, -25, 300, -7775):
    cat, word = paircode.encode_value(v)
    print(f"  {v:>6} -> category {cat}, {word or '(empty)':<10} back to {paircode.decode_value(cat, word)}")

# A ternary code for a skewed alphabet; the rotation coder never repeats a base.
# Symbols are small integers, as in the codec's tables.
freqs = {0: 40, 1: 25, 2: 15, 3: 10, 4: 6, 5: 4}
code = build_code(freqs)
print("\nTernary prefix code")
for s in code.symbols:
    print(f"  {s}: {''.join(map(str, code.codes[s]))}")
msg = [1, 1, 0, 4, 5, 1, 2, 0]
trits = encode_symbols(msg, code)
nt = trits_to_nt(trits)
print(f"\nmessage {msg}")
print(f"  trits       {trits}")
print(f"  nucleotides {nt}")
print(f"  {validate(nt)}")
assert nt_to_trits(nt) == trits
