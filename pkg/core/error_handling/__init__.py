"""
오류 처리 패키지.

이 패키지는 hanlm의 예외 계층과, 명령 실행 중 발생한 오류를
단계 이름이 포함된 진단 메시지와 종료 코드로 변환하는 처리기를 제공합니다.
"""
