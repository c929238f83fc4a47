#pragma once
// Row-compressed stochastic matrices, left evolution, SCC decomposition.
// Rows are short (<= Delta+1 entries for the kernels here), so everything is
// linear scans over CSR arrays.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace permix {

struct Triplet {
    int row;
    int col;
    double val;
};

struct StochasticMatrix {
    int n = 0;
    std::vector<int> row_ptr; // size n+1
    std::vector<int> col;
    std::vector<double> val;

    // Builds CSR, merging duplicate (row,col) pairs by addition.
    static StochasticMatrix from_triplets(int n, std::vector<Triplet> entries);

    int row_begin(int i) const { return row_ptr[i]; }
    int row_end(int i) const { return row_ptr[i + 1]; }
    double row_sum(int i) const;
    double at(int i, int j) const; // 0 if absent

    // Every row must sum to 1 within tol; entries nonnegative.
    void validate_stochastic(double tol = 1e-12) const;
};

// out = mu K (left action); out resized to K.n.
void left_multiply(const StochasticMatrix& K, const std::vector<double>& mu,
                   std::vector<double>& out);

std::vector<std::vector<double>> to_dense(const StochasticMatrix& K);
StochasticMatrix dense_to_sparse(const std::vector<std::vector<double>>& D,
                                 double drop_tol = 0.0);

// ---------------------- strongly connected components ----------------------
struct SccResult {
    int count = 0;
    std::vector<int> comp_of;        // state -> component id
    std::vector<char> is_recurrent;  // component id -> closed (no edge leaves)
    std::vector<std::vector<int>> members;
};
SccResult strongly_connected_components(const StochasticMatrix& K);

} // namespace permix
