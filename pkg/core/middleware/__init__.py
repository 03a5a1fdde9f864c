"""
미들웨어 패키지.

명령 실행 단계를 감싸 시작/완료/실패를 실행 id와 함께 기록하는 미들웨어를 제공합니다.
"""
