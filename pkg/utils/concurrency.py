from typing import Any, List


def create_chunks(data: List[Any], chunk_size: int) -> List[List[Any]]:
    chunk_size = max(1, chunk_size)
    return [data[i:i + chunk_size] for i in range(0, len(data), chunk_size)]
