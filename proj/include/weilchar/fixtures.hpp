#pragma once

// Small configurations shared by the built-in checks and the scenario runner.

#include <string>
#include <vector>

#include "weilchar/signcalc.hpp"

namespace wc {

// Maximal tori of Sp_2 and the block tori of Sp_4.
std::vector<TorusDesc> sp2_tori();
std::vector<TorusDesc> sp4_tori();

FpMat block_diag(const std::vector<FpMat>& ms);

// Copies of the standard space of dimension 2n, one per block; groups list
// block indices in cycle order and maps[b] sends block b to its successor.
BlockTwist make_block_twist(int p, int n, const std::vector<std::vector<int>>& groups, const std::vector<FpMat>& maps);

// Orbit actions with one or two blocks and the scenarios attached to them,
// with every admissible s.
struct AssemblyFixture {
    std::string name;
    bool factored = true;
    std::vector<AssembleInput> inputs;
};
std::vector<AssemblyFixture> assembly_fixtures(int p);

}  // namespace wc
