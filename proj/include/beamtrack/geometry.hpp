#pragma once

#include <stdexcept>

namespace beamtrack {

struct CellBounds {
    double x_lo, x_hi, y_lo, y_hi;
};

/// Square detector array covering [-a, a] x [-a, a], split into N x N equal
/// square cells. Cells are indexed 0..M-1 row-major from the bottom-left
/// corner: cell 0 touches (-a, -a), the index advances along +x first, then +y.
class ArrayGeometry {
public:
    ArrayGeometry(double half_width, int cells_per_side)
        : a_(half_width), n_(cells_per_side) {
        if (!(half_width > 0.0))
            throw std::invalid_argument("ArrayGeometry: half_width must be > 0");
        if (cells_per_side < 1)
            throw std::invalid_argument("ArrayGeometry: cells_per_side must be >= 1");
    }

    double half_width() const { return a_; }
    int cells_per_side() const { return n_; }
    int cell_count() const { return n_ * n_; }
    double cell_side() const { return 2.0 * a_ / n_; }
    double cell_area() const { return cell_side() * cell_side(); }
    double array_area() const { return 4.0 * a_ * a_; }

    int cell_index(int col, int row) const { return row * n_ + col; }

    CellBounds cell_bounds(int m) const {
        check_index(m);
        const int row = m / n_;
        const int col = m % n_;
        const double side = cell_side();
        const double x_lo = -a_ + col * side;
        const double y_lo = -a_ + row * side;
        return {x_lo, x_lo + side, y_lo, y_lo + side};
    }

    double cell_center_x(int m) const {
        check_index(m);
        return -a_ + (m % n_ + 0.5) * cell_side();
    }

    double cell_center_y(int m) const {
        check_index(m);
        return -a_ + (m / n_ + 0.5) * cell_side();
    }

private:
    void check_index(int m) const {
        if (m < 0 || m >= cell_count())
            throw std::out_of_range("ArrayGeometry: cell index out of range");
    }

    double a_;
    int n_;
};

}  // namespace beamtrack
