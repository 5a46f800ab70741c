"""Reading residues and heavy-atom coordinates out of PDB text.

Only fixed-column ATOM records are consumed.  HETATM, waters, and anything
after the first ENDMDL are ignored, so multi-model NMR entries contribute
their first model only.  Alternate locations keep the blank or 'A'
conformer.  Hydrogens and deuteriums are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ChainNotFoundError, DegenerateInputError, PdbParseError

_SKIP_ELEMENTS = {"H", "D"}


@dataclass
class HeavyAtom:
    element: str
    coords: np.ndarray  # shape (3,), float64, angstroms


@dataclass
class Residue:
    ordinal: int           # 1-based position within the extracted chain
    author_number: int     # resSeq as written in the file
    insertion_code: str    # '' when blank
    atoms: list[HeavyAtom] = field(default_factory=list)

    def coord_array(self) -> np.ndarray:
        return np.array([a.coords for a in self.atoms], dtype=np.float64)


@dataclass
class ResidueChain:
    protein_id: str
    chain_id: str
    residues: list[Residue]

    def __len__(self) -> int:
        return len(self.residues)


def _infer_element(name: str, line_number: int) -> str:
    """Element from the atom-name columns when columns 77-78 are blank.

    One-letter elements of standard residues start in column 14, so a
    leading space or digit means the second character is the element.
    Four-character names starting with H are hydrogens.
    """
    if not name.strip():
        raise PdbParseError("blank atom name", line_number)
    if name[0] in " 0123456789":
        for ch in name:
            if ch.isalpha():
                return ch.upper()
        raise PdbParseError(f"cannot infer element from atom name {name!r}", line_number)
    if len(name.strip()) == 4 and name[0].upper() == "H":
        return "H"
    return name[:2].strip().upper()


def parse_pdb(
    text: str,
    chain: str,
    residue_range: tuple[int, int] | None = None,
    protein_id: str | None = None,
) -> ResidueChain:
    """Extract one chain as a list of residues with heavy-atom coordinates.

    ``residue_range`` is an inclusive interval of author residue numbers.
    Residues are ordered by (author number, insertion code) and given
    1-based ordinals; residues left without any heavy atom are dropped.

    Raises ChainNotFoundError if the chain id never occurs,
    DegenerateInputError if fewer than 2 residues survive, and
    PdbParseError (with a line number) on malformed records.
    """
    residues: dict[tuple[int, str], Residue] = {}
    chains_seen: set[str] = set()
    header_id = ""

    for line_number, line in enumerate(text.splitlines(), start=1):
        record = line[:6]
        if record == "HEADER":
            header_id = line[62:66].strip()
            continue
        if record == "ENDMDL":
            break
        if record != "ATOM  ":
            continue
        if len(line) < 54:
            raise PdbParseError("ATOM record shorter than coordinate columns", line_number)
        chain_id = line[21]
        chains_seen.add(chain_id)
        if chain_id != chain:
            continue
        altloc = line[16]
        if altloc not in (" ", "A"):
            continue
        try:
            author_number = int(line[22:26])
        except ValueError:
            raise PdbParseError(f"bad residue number {line[22:26]!r}", line_number) from None
        if residue_range is not None and not residue_range[0] <= author_number <= residue_range[1]:
            continue
        element = line[76:78].strip().upper() if len(line) >= 78 else ""
        if not element:
            element = _infer_element(line[12:16], line_number)
        if element in _SKIP_ELEMENTS:
            continue
        try:
            coords = np.array(
                [float(line[30:38]), float(line[38:46]), float(line[46:54])],
                dtype=np.float64,
            )
        except ValueError:
            raise PdbParseError(f"bad coordinates {line[30:54]!r}", line_number) from None
        if not np.all(np.isfinite(coords)):
            raise PdbParseError("non-finite coordinates", line_number)
        icode = line[26].strip() if len(line) > 26 else ""
        key = (author_number, icode)
        residue = residues.get(key)
        if residue is None:
            residue = residues[key] = Residue(0, author_number, icode)
        residue.atoms.append(HeavyAtom(element, coords))

    if chain not in chains_seen:
        raise ChainNotFoundError(
            f"chain {chain!r} not in file (chains present: {sorted(chains_seen)})"
        )
    ordered = [residues[k] for k in sorted(residues)]
    ordered = [r for r in ordered if r.atoms]
    if len(ordered) < 2:
        raise DegenerateInputError(
            f"chain {chain!r} has {len(ordered)} usable residues, need at least 2"
        )
    for ordinal, residue in enumerate(ordered, start=1):
        residue.ordinal = ordinal
    return ResidueChain(protein_id if protein_id is not None else header_id, chain, ordered)
