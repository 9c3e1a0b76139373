#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fairkg/error.hpp"
#include "fairkg/tensor.hpp"

namespace fairkg {
namespace {

TEST(Tensor, ZerosHaveRequestedShape) {
  Tensor t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  for (double v : t.values()) EXPECT_EQ(v, 0.0);
}

TEST(Tensor, ValueCountMustMatchShape) {
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0, 3.0}), ShapeError);
  EXPECT_NO_THROW(Tensor({2, 2}, {1.0, 2.0, 3.0, 4.0}));
}

TEST(Tensor, RowMajorAccess) {
  Tensor m = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(m.at(1, 0), 4.0);
  auto r = m.row(1);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[2], 6.0);
}

TEST(Tensor, VectorIsOneRow) {
  Tensor v = Tensor::vector({1, 2, 3});
  EXPECT_EQ(v.rank(), 1u);
  EXPECT_EQ(v.rows(), 1u);
  EXPECT_EQ(v.cols(), 3u);
}

TEST(Tensor, ScalarItem) {
  EXPECT_EQ(Tensor::scalar(2.5).item(), 2.5);
  EXPECT_TRUE(Tensor::scalar(1.0).shape().empty());
  EXPECT_THROW(Tensor::vector({1, 2}).item(), ShapeError);
}

TEST(Tensor, IdentityMatrix) {
  Tensor i = Tensor::identity(3);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(i.at(r, c), r == c ? 1.0 : 0.0);
  }
}

TEST(Tensor, FiniteCheck) {
  Tensor t = Tensor::vector({1, 2});
  EXPECT_TRUE(t.all_finite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(t.all_finite());
  t[1] = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(t.all_finite());
}

TEST(Tensor, ShapeHelpers) {
  EXPECT_EQ(shape_size({2, 3, 4}), 24u);
  EXPECT_EQ(shape_size({}), 1u);
  EXPECT_EQ(shape_string({2, 3}), "(2, 3)");
  EXPECT_THROW(require_same_shape(Tensor({2}), Tensor({3}), "op"), ShapeError);
}

}  // namespace
}  // namespace fairkg
