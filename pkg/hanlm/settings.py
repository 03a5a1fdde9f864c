"""
Django settings for the hanlm toolkit.

hanlm은 웹 서비스가 아니라 명령행 도구이므로 데이터베이스, URL 라우팅, 미들웨어 스택은
사용하지 않습니다. Django는 설정, 로깅 구성, 관리 명령 프레임워크를 위해서만 사용됩니다.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

from pathlib import Path
import os
import environ

env = environ.Env()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load .env file if it exists
env_file = os.path.join(BASE_DIR, '.env')
if os.path.isfile(env_file):
    env.read_env(env_file)


# 관리 명령만 사용하므로 키는 형식상 필요할 뿐입니다
SECRET_KEY = env('SECRET_KEY', default='hanlm-cli-not-a-secret')

DEBUG = env.bool('DEBUG', default=False)

VERSION = '0.3.0'


# Application definition

# 프로젝트 앱 (관리 명령 검색을 위해 core 등록)
PROJECT_APPS = [
    'core',
]

INSTALLED_APPS = PROJECT_APPS

# 데이터베이스는 사용하지 않습니다
DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'ko-kr'

TIME_ZONE = 'Asia/Seoul'

USE_I18N = False

USE_TZ = True


# hanlm 실행 설정

# 상대 출력 경로와 실행 매니페스트의 기준 디렉토리
OUTPUT_ROOT = Path(env('HANLM_OUTPUT_ROOT', default=str(BASE_DIR / 'runs')))

MANIFEST_DIR_NAME = 'manifests'

# 기사 수집기의 요청 간 대기 시간(초)
FETCH_DELAY_SECONDS = env.float('HANLM_FETCH_DELAY', default=2.0)

# 파일 단위 수집 작업자 수. 학습은 항상 단일 작업자입니다.
NUM_WORKERS = env.int('HANLM_NUM_WORKERS', default=1)

# 실행 로그에서 옵션 값을 자를 길이
LOG_OPTION_VALUE_LIMIT = 200

LOG_LEVEL = env('HANLM_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(asctime)s %(levelname)s %(name)s %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'core': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': True,
        },
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
        },
    },
}
