#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pmcw/error.hpp"

namespace pmcw {

using cdouble = std::complex<double>;

/// Dense complex matrix in column-major order. A column is one pulse
/// (fast time) or one Doppler bin, so columns are contiguous.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    cdouble& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const noexcept
    {
        return data_[c * rows_ + r];
    }

    std::span<cdouble> column(std::size_t c) noexcept { return {data_.data() + c * rows_, rows_}; }
    std::span<const cdouble> column(std::size_t c) const noexcept
    {
        return {data_.data() + c * rows_, rows_};
    }

    std::span<cdouble> values() noexcept { return data_; }
    std::span<const cdouble> values() const noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other)
    {
        if (other.rows_ != rows_ || other.cols_ != cols_) {
            throw Error("matrix dimension mismatch");
        }
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += other.data_[i];
        }
        return *this;
    }

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

} // namespace pmcw
