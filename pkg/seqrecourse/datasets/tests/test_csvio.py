import numpy as np
import pytest

from seqrecourse.datasets.csvio import load_csv, write_csv
from seqrecourse.exceptions import DataFormatError


def write(tmp_path, text, name='data.csv'):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return path


def test_load_in_file_order(tmp_path):
    path = write(tmp_path, 'label,b,a\n0,1.5,2\n1,-3,4e-1\n')
    raw, labels, names = load_csv(path)
    assert names == ['b', 'a']
    np.testing.assert_array_equal(raw, [[1.5, 2.0], [-3.0, 0.4]])
    np.testing.assert_array_equal(labels, [0, 1])


def test_custom_label_column(tmp_path):
    path = write(tmp_path, 'x,y\n1,0\n2,1\n')
    raw, labels, names = load_csv(path, label_column='y')
    assert names == ['x']
    assert labels.tolist() == [0, 1]


@pytest.mark.parametrize('text, row, column', [
    ('a,label\n1,0\nfoo,1\n', 2, 'a'),
    ('a,label\n1,0\n2,1\n,0\n', 3, 'a'),
    ('a,label\n1,0\ninf,1\n', 2, 'a'),
    ('a,b,label\n1,2,0\n3,NaN,1\n', 2, 'b'),
    ('a,b,label\n1,2,0\n3,1\n', 2, 'label'),
])
def test_bad_cell_names_row_and_column(tmp_path, text, row, column):
    with pytest.raises(DataFormatError) as info:
        load_csv(write(tmp_path, text))
    assert info.value.row == row
    assert info.value.column == column


def test_label_must_be_binary(tmp_path):
    with pytest.raises(DataFormatError) as info:
        load_csv(write(tmp_path, 'a,label\n1,0\n2,2\n'))
    assert info.value.column == 'label'


@pytest.mark.parametrize('text', [
    '',
    'a,a,label\n1,2,0\n',
    'a,,label\n1,2,0\n',
    'a,b\n1,2\n',
    'a,label\n',
    'label\n0\n',
])
def test_bad_header_or_shape(tmp_path, text):
    with pytest.raises(DataFormatError):
        load_csv(write(tmp_path, text))


def test_write_then_load_keeps_precision(tmp_path):
    rng = np.random.default_rng(0)
    raw = rng.normal(size=(25, 3))
    labels = rng.integers(0, 2, size=25)
    path = write_csv(tmp_path / 'sub' / 'out.csv', raw, labels, ['p', 'q', 'r'])
    back, back_labels, names = load_csv(path)
    assert names == ['p', 'q', 'r']
    np.testing.assert_array_equal(back, raw)
    np.testing.assert_array_equal(back_labels, labels)
