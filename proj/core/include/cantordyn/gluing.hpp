#pragma once

#include <string>
#include <vector>

#include "cantordyn/spec_model.hpp"

namespace cantordyn {

// Kinds of complementary components of the level-1 curves.
enum class PieceKind { complex, disk, annular, trivial };

std::string to_string(PieceKind kind);

// Classification by the marked points inside a piece (k) and the number of
// complementary components holding marked points (c).
PieceKind classify_piece(int marked_inside, int marked_components);

struct GluedPiece {
  std::string source;  // level-0 vertex the piece maps onto
  std::size_t index = 0;
  PreimagePiece piece;
  PieceKind kind = PieceKind::trivial;
  int marked_components = 0;
  // Disk pieces: the peripheral class around their point; annular pieces: the
  // class of their core curve. Empty otherwise.
  std::string core_class;
};

struct GluedCurve {
  CurveRef ref;
  std::string image_class;
  int local_degree = 1;
  std::size_t from_piece = 0;  // piece inside sub[config edge .from]
  std::size_t to_piece = 0;
  int marked_from_side = 0;
  int marked_to_side = 0;
  bool in_gamma = false;  // image class is a level-0 edge class
};

// The level-1 dual tree built from the substitution rules: pieces are the
// components of F^{-1}(complement of Γ), curves the entries of pullback[γ], γ ∈ Γ.
struct Level1Gluing {
  std::vector<GluedPiece> pieces;
  std::vector<GluedCurve> curves;

  std::size_t find_curve(const CurveRef& ref) const;
  // Pieces merged across curves whose class is outside Γ; one group per T₁ vertex.
  std::vector<std::size_t> contracted_groups() const;
};

// Requires the reference-level checks of validate to have passed; reports
// structural problems (non-tree, wrong side counts, ...) into `diag`.
Level1Gluing glue_level1(const MapSpec& spec, Diagnostics& diag);

}  // namespace cantordyn
