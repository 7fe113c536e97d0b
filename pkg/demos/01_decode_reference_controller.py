"""From genome table to PLC text.

Builds the seven-row reference controller for the tank station, checks it,
decodes it to rung expressions, and prints every downstream representation:
structured text, instruction list, and the minimized behavior summary.
"""

import evoplc as e

# The genome is an ordered table. A row that names an output opens a rung;
# rows without an output extend the current rung with AND/OR literals.
controller = e.reference_controller()

print("genome rows")
for n, row in enumerate(controller.rows):
    output = row.output.value if row.output else "  "
    neg = "NOT " if row.negated else ""
    print(f"  {n}: {output:>2} {row.operator.value:>6} {neg}{row.input.value} "
          f"[mode {row.mode.value}]")

print("\nvalidation:", e.validate(controller) or "clean")

# Decoding folds the rows left to right into one expression per rung.
print("\ndecoded rungs")
for rung in e.decode(controller):
    flag = " (implicit)" if rung.implicit else ""
    print(f"  {rung.target.value} [{rung.mode.value}]{flag}")

print("\nstructured text")
print(e.emit_structured_text(controller).text)

print("instruction list")
print(e.emit_instruction_list(controller))

print("behavior summary")
print(e.derive_behavior_summary(controller).text)

# The emitted text parses back to rungs with identical truth tables.
parsed = e.parse_structured_text(e.emit_structured_text(controller).text)
print(f"round trip recovered {len(parsed)} rungs")
