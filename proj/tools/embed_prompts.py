#!/usr/bin/env python3
"""Regenerates include/dualtrack/prompt_defaults.hpp from prompts/*.txt."""

import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
LICENSE = (ROOT / "include/dualtrack/error.hpp").read_text().split("#pragma once")[0]


def main() -> None:
    out = [LICENSE.rstrip() + "\n", "// Generated by tools/embed_prompts.py from prompts/*.txt. Do not edit.\n",
           "#pragma once\n", "#include <array>", "#include <string_view>", "#include <utility>\n",
           "namespace dualtrack::prompt_defaults {\n"]
    names = []
    for path in sorted((ROOT / "prompts").glob("*.txt")):
        body = path.read_text(encoding="utf-8")
        if body.endswith("\n"):
            body = body[:-1]
        assert ')prompt"' not in body
        names.append(path.stem)
        out.append(f'inline constexpr std::string_view k_{path.stem} = R"prompt({body})prompt";\n')
    out.append(f"inline constexpr std::array<std::pair<std::string_view, std::string_view>, {len(names)}> kAll{{{{")
    for n in names:
        out.append(f'    {{"{n}", k_{n}}},')
    out.append("}};\n")
    out.append("}  // namespace dualtrack::prompt_defaults")
    (ROOT / "include/dualtrack/prompt_defaults.hpp").write_text("\n".join(out) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
